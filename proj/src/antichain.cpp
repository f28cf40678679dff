#include "monodual/antichain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace monodual {

namespace {

unsigned level_sum(const Configuration& x) {
  unsigned s = 0;
  for (const auto& e : x.entries()) s += e.level;
  return s;
}

void check_member(std::size_t num_sites, Level levels, const Configuration& y) {
  if (y.num_sites() != num_sites || y.levels() != levels)
    throw ConfigError("antichain element lives on a different grid or state space");
  if (y.is_zero()) throw ConfigError("antichain cannot contain the zero configuration");
}

}  // namespace

Antichain::Antichain(std::size_t num_sites, Level levels) : num_sites_(num_sites), levels_(levels) {}

Antichain Antichain::minimalize(std::size_t num_sites, Level levels, std::vector<Configuration> candidates) {
  for (const auto& y : candidates) check_member(num_sites, levels, y);
  // A strictly smaller element has a smaller support or the same support with
  // a smaller level sum, so it is always visited first.
  std::vector<std::pair<std::pair<std::size_t, unsigned>, std::size_t>> order;
  order.reserve(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k)
    order.push_back({{candidates[k].support_size(), level_sum(candidates[k])}, k});
  std::sort(order.begin(), order.end());

  Antichain out(num_sites, levels);
  for (const auto& [key, k] : order) {
    const auto& y = candidates[k];
    bool dominated = false;
    for (const auto& z : out.elements_)
      if (leq(z, y)) {
        dominated = true;
        break;
      }
    if (!dominated) out.elements_.push_back(std::move(candidates[k]));
  }
  std::sort(out.elements_.begin(), out.elements_.end());
  return out;
}

Antichain Antichain::from_elements(std::size_t num_sites, Level levels, std::vector<Configuration> elements) {
  for (const auto& y : elements) check_member(num_sites, levels, y);
  for (std::size_t a = 0; a < elements.size(); ++a)
    for (std::size_t b = 0; b < elements.size(); ++b)
      if (a != b && leq(elements[a], elements[b]))
        throw ConfigError("elements " + elements[a].to_string() + " and " + elements[b].to_string() +
                          " are comparable");
  Antichain out(num_sites, levels);
  out.elements_ = std::move(elements);
  std::sort(out.elements_.begin(), out.elements_.end());
  return out;
}

Antichain Antichain::assume_minimal(std::size_t num_sites, Level levels, std::vector<Configuration> elements) {
#ifndef NDEBUG
  return from_elements(num_sites, levels, std::move(elements));
#else
  for (const auto& y : elements) check_member(num_sites, levels, y);
  Antichain out(num_sites, levels);
  out.elements_ = std::move(elements);
  std::sort(out.elements_.begin(), out.elements_.end());
  return out;
#endif
}

bool Antichain::contains(const Configuration& y) const {
  return std::binary_search(elements_.begin(), elements_.end(), y);
}

std::strong_ordering operator<=>(const Antichain& a, const Antichain& b) noexcept {
  if (auto c = a.num_sites_ <=> b.num_sites_; c != 0) return c;
  if (auto c = a.levels_ <=> b.levels_; c != 0) return c;
  return std::lexicographical_compare_three_way(a.elements_.begin(), a.elements_.end(), b.elements_.begin(),
                                                b.elements_.end());
}

std::string Antichain::to_string() const {
  std::string s = "{";
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (k) s += ", ";
    s += elements_[k].to_string();
  }
  return s + "}";
}

void require_compatible(const Antichain& Y, const Antichain& Z) {
  if (Y.num_sites() != Z.num_sites() || Y.levels() != Z.levels())
    throw ConfigError("antichains live on different grids or state spaces");
}

bool psi_mon(const Configuration& x, const Antichain& Y) {
  if (x.num_sites() != Y.num_sites() || x.levels() != Y.levels())
    throw ConfigError("configuration and antichain live on different grids");
  return std::any_of(Y.elements().begin(), Y.elements().end(), [&](const Configuration& y) { return leq(y, x); });
}

bool order_leq(const Antichain& Y, const Antichain& Z) {
  require_compatible(Y, Z);
  for (const auto& y : Y.elements())
    if (std::none_of(Z.elements().begin(), Z.elements().end(), [&](const Configuration& z) { return leq(z, y); }))
      return false;
  return true;
}

Antichain make_y_top(std::size_t num_sites, Level levels) {
  std::vector<Configuration> elems;
  elems.reserve(num_sites);
  for (Site i = 0; i < num_sites; ++i) elems.push_back(Configuration::basis(num_sites, levels, i));
  return Antichain::from_elements(num_sites, levels, std::move(elems));
}

double WindowDistance::distance() const noexcept {
  return equal ? 0.0 : std::pow(3.0, -static_cast<double>(level));
}

WindowDistance antichain_window_distance(const Antichain& Y, const Antichain& Z) {
  require_compatible(Y, Z);
  // Restricted to configurations on {γ ≤ n}, the upset of Y is generated by
  // the elements of Y living there. Agreement up to n therefore means the two
  // element lists coincide below n; the first disagreement is the smallest
  // max-γ over the symmetric difference.
  auto max_gamma = [](const Configuration& y) { return static_cast<std::uint32_t>(y.entries().back().site) + 1; };
  std::uint32_t first = UINT32_MAX;
  for (const auto& y : Y.elements())
    if (!Z.contains(y)) first = std::min(first, max_gamma(y));
  for (const auto& z : Z.elements())
    if (!Y.contains(z)) first = std::min(first, max_gamma(z));
  if (first == UINT32_MAX) return {true, static_cast<std::uint32_t>(Y.num_sites())};
  return {false, first - 1};
}

bool is_additive_state(const Antichain& Y) {
  return std::all_of(Y.elements().begin(), Y.elements().end(),
                     [](const Configuration& y) { return y.support_size() == 1; });
}

}  // namespace monodual
