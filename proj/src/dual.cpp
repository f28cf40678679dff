#include "monodual/dual.hpp"

#include <algorithm>

#include "monodual/dual_state.hpp"

namespace monodual {

std::vector<Configuration> preimage_minima(const LocalMap& m, const Configuration& y) {
  if (y.is_zero()) throw ConfigError("preimage of the zero configuration's upset is everything");
  const auto& dep = m.dependence();
  const bool touched =
      std::any_of(dep.changed.begin(), dep.changed.end(), [&](Site j) { return y[j] != 0; });
  if (!touched) return {y};

  std::vector<Site> window = dep.changed;
  for (Site j : dep.changed) {
    const auto src = dep.sources(j);
    window.insert(window.end(), src.begin(), src.end());
  }
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  if (window.back() >= y.num_sites()) throw ConfigError("map " + m.to_string() + " refers to sites off the grid");

  Configuration base = y;
  for (Site k : window) base.set(k, 0);
  const unsigned radix = unsigned{y.levels()} + 1;
  std::size_t states = 1;
  for (std::size_t k = 0; k < window.size(); ++k) states *= radix;

  std::vector<Configuration> hits;
  std::vector<Level> digits(window.size(), 0);
  for (std::size_t code = 0; code < states; ++code) {
    std::size_t c = code;
    for (std::size_t k = window.size(); k-- > 0;) {
      digits[k] = static_cast<Level>(c % radix);
      c /= radix;
    }
    Configuration x = base;
    for (std::size_t k = 0; k < window.size(); ++k) x.set(window[k], digits[k]);
    if (leq(y, m.apply(x))) hits.push_back(std::move(x));
  }
  auto minima = Antichain::minimalize(y.num_sites(), y.levels(), std::move(hits));
  return {minima.elements().begin(), minima.elements().end()};
}

namespace {

void require_eligible(const LocalMap& m, Level levels) {
  if (m.kind() == MapKind::Custom && !m.is_eligible(levels))
    throw ConfigError("map " + m.to_string() + " is not monotone with m(0)=0; it has no dual");
}

void require_binary(const Antichain& Y) {
  if (Y.levels() != 1) throw ConfigError("closed-form dual maps need S = {0,1}");
}

}  // namespace

Antichain dual_apply_generic(const LocalMap& m, const Antichain& Y) {
  require_eligible(m, Y.levels());
  std::vector<Configuration> cands;
  for (const auto& y : Y.elements()) {
    auto pre = preimage_minima(m, y);
    cands.insert(cands.end(), std::make_move_iterator(pre.begin()), std::make_move_iterator(pre.end()));
  }
  return Antichain::minimalize(Y.num_sites(), Y.levels(), std::move(cands));
}

Antichain dual_apply_death(Site j, const Antichain& Y) {
  require_binary(Y);
  std::vector<Configuration> kept;
  for (const auto& y : Y.elements())
    if (y[j] == 0) kept.push_back(y);
  return Antichain::from_elements(Y.num_sites(), 1, std::move(kept));
}

Antichain dual_apply_branch(Site i, Site j, const Antichain& Y) {
  require_binary(Y);
  std::vector<Configuration> cands(Y.elements().begin(), Y.elements().end());
  for (const auto& y : Y.elements())
    if (y[j] == 1) {
      Configuration z = without(y, j);
      z.set(i, 1);
      cands.push_back(std::move(z));
    }
  return Antichain::minimalize(Y.num_sites(), 1, std::move(cands));
}

Antichain dual_apply_coop(Site i, Site i2, Site j, const Antichain& Y) {
  require_binary(Y);
  std::vector<Configuration> cands(Y.elements().begin(), Y.elements().end());
  for (const auto& y : Y.elements())
    if (y[j] == 1) {
      Configuration z = without(y, j);
      z.set(i, 1);
      z.set(i2, 1);
      cands.push_back(std::move(z));
    }
  return Antichain::minimalize(Y.num_sites(), 1, std::move(cands));
}

Antichain dual_apply_explicit(const LocalMap& m, const Antichain& Y) {
  switch (m.kind()) {
    case MapKind::Death:
      return dual_apply_death(m.target(), Y);
    case MapKind::Branch:
      return dual_apply_branch(m.source(), m.target(), Y);
    case MapKind::Coop:
      return dual_apply_coop(m.source(), m.source2(), m.target(), Y);
    case MapKind::Custom:
      break;
  }
  throw ConfigError("custom maps have no closed-form dual");
}

Antichain dual_apply(const LocalMap& m, const Antichain& Y) {
  if (Y.levels() == 1 && m.kind() != MapKind::Custom) return dual_apply_explicit(m, Y);
  return dual_apply_generic(m, Y);
}

namespace {

void require_on_log(const EventLog& log, const Antichain& Y) {
  if (Y.num_sites() != log.family().num_sites() || Y.levels() != log.family().levels())
    throw ConfigError("antichain does not live on the log's grid");
}

}  // namespace

Antichain backward_flow(const EventLog& log, const Antichain& Y, double u, double s) {
  require_on_log(log, Y);
  const auto events = log.between(s, u);
  if (Y.levels() != 1) return backward_flow_with(log, Y, u, s, dual_apply);
  auto state = SparseDualState::from_antichain(Y);
  for (auto it = events.rbegin(); it != events.rend() && !state.empty(); ++it)
    state.apply(log.family().map(it->map));
  return state.to_antichain();
}

Antichain backward_flow_with(const EventLog& log, const Antichain& Y, double u, double s, const DualApplier& dual) {
  require_on_log(log, Y);
  const auto events = log.between(s, u);
  Antichain state = Y;
  for (auto it = events.rbegin(); it != events.rend() && !state.empty(); ++it)
    state = dual(log.family().map(it->map), state);
  return state;
}

bool check_pathwise_duality(const EventLog& log, const Configuration& x, const Antichain& Y, double s, double t) {
  const bool lhs = psi_mon(forward_flow(log, x, s, t), Y);
  const bool rhs = psi_mon(x, backward_flow(log, Y, t, s));
  return lhs == rhs;
}

bool additive_closure_check(const EventLog& log, const Antichain& Y) {
  require_on_log(log, Y);
  Antichain state = Y;
  if (!is_additive_state(state)) return false;
  const auto events = log.events();
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    state = dual_apply(log.family().map(it->map), state);
    if (!is_additive_state(state)) return false;
  }
  return true;
}

}  // namespace monodual
