#include "monodual/exact.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <tuple>

#include "monodual/dual.hpp"
#include "monodual/kernels.hpp"

namespace monodual {

namespace {

std::size_t count_states(std::size_t num_sites, Level levels) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < num_sites; ++k) {
    n *= std::size_t{levels} + 1;
    if (n > kMaxEnumeratedStates)
      throw BudgetError("state space exceeds " + std::to_string(kMaxEnumeratedStates) + " configurations");
  }
  return n;
}

}  // namespace

std::vector<Configuration> enumerate_states(std::size_t num_sites, Level levels) {
  const std::size_t n = count_states(num_sites, levels);
  const unsigned radix = unsigned{levels} + 1;
  std::vector<Configuration> out;
  out.reserve(n);
  for (std::size_t code = 0; code < n; ++code) {
    Configuration x(num_sites, levels);
    std::size_t c = code;
    for (Site i = 0; i < num_sites; ++i) {
      x.set(i, static_cast<Level>(c % radix));
      c /= radix;
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::size_t state_index(const Configuration& x) {
  std::size_t idx = 0, scale = 1;
  const std::size_t radix = std::size_t{x.levels()} + 1;
  for (Site i = 0; i < x.num_sites(); ++i) {
    idx += x[i] * scale;
    scale *= radix;
  }
  return idx;
}

std::vector<Antichain> enumerate_antichains(std::size_t num_sites, Level levels) {
  const std::size_t n = count_states(num_sites, levels);
  if (num_sites > kMaxAntichainSites || n - 1 > 15)
    throw BudgetError("antichain enumeration is limited to at most 15 nonzero configurations");
  std::vector<Configuration> pool = enumerate_states(num_sites, levels);
  pool.erase(pool.begin());  // 0̲
  std::sort(pool.begin(), pool.end());

  std::vector<Antichain> out;
  std::vector<Configuration> chosen;
  // Decide each pool element in turn; keep it only if incomparable with
  // everything already chosen.
  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (k == pool.size()) {
      out.push_back(Antichain::from_elements(num_sites, levels, chosen));
      return;
    }
    self(self, k + 1);
    const auto& y = pool[k];
    for (const auto& z : chosen)
      if (leq(z, y) || leq(y, z)) return;
    chosen.push_back(y);
    self(self, k + 1);
    chosen.pop_back();
  };
  recurse(recurse, 0);
  std::sort(out.begin(), out.end());
  return out;
}

GeneratorMatrix::GeneratorMatrix(std::size_t size,
                                 std::vector<std::tuple<std::size_t, std::size_t, double>> jumps) {
  std::sort(jumps.begin(), jumps.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });
  diag_.assign(size, 0.0);
  row_ptr_.assign(size + 1, 0);
  for (const auto& [from, to, r] : jumps) {
    if (from >= size || to >= size || from == to) throw ConfigError("generator jump out of range or diagonal");
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("generator rates must be finite and nonnegative");
  }
  std::size_t k = 0;
  for (std::size_t row = 0; row < size; ++row) {
    // Row sum accumulated in column order, then negated: the diagonal is
    // exactly minus the sum of the stored entries.
    double sum = 0.0;
    while (k < jumps.size() && std::get<0>(jumps[k]) == row) {
      const auto to = std::get<1>(jumps[k]);
      double r = 0.0;
      while (k < jumps.size() && std::get<0>(jumps[k]) == row && std::get<1>(jumps[k]) == to)
        r += std::get<2>(jumps[k++]);
      if (r == 0.0) continue;
      cols_.push_back(static_cast<std::uint32_t>(to));
      vals_.push_back(r);
      sum += r;
    }
    diag_[row] = -sum;
    row_ptr_[row + 1] = cols_.size();
  }
}

double GeneratorMatrix::rate(std::size_t from, std::size_t to) const {
  if (from == to) return diag_[from];
  for (std::size_t k = row_ptr_[from]; k < row_ptr_[from + 1]; ++k)
    if (cols_[k] == to) return vals_[k];
  return 0.0;
}

double GeneratorMatrix::max_exit_rate() const noexcept {
  double q = 0.0;
  for (double d : diag_) q = std::max(q, -d);
  return q;
}

void GeneratorMatrix::left_multiply(std::span<const double> v, std::span<double> out) const {
  std::copy(v.begin(), v.end(), out.begin());
  kernels::scale_by(out, diag_);
  for (std::size_t row = 0; row < size(); ++row) {
    const double vr = v[row];
    if (vr == 0.0) continue;
    for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) out[cols_[k]] += vr * vals_[k];
  }
}

void GeneratorMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << size() << ' ' << size() << ' ' << (cols_.size() + size()) << '\n';
  os << std::setprecision(17);
  for (std::size_t row = 0; row < size(); ++row) {
    os << row + 1 << ' ' << row + 1 << ' ' << diag_[row] << '\n';
    for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
      os << row + 1 << ' ' << cols_[k] + 1 << ' ' << vals_[k] << '\n';
  }
}

std::size_t ForwardChain::index_of(const Configuration& x) const {
  const auto idx = state_index(x);
  if (idx >= states.size() || !(states[idx] == x)) throw ConfigError("configuration is not a state of this chain");
  return idx;
}

std::size_t DualChain::index_of(const Antichain& Y) const {
  auto it = index.find(Y);
  if (it == index.end()) throw ConfigError("antichain is not a state of this chain");
  return it->second;
}

ForwardChain build_forward_generator(const RatedFamily& family) {
  ForwardChain chain;
  chain.states = enumerate_states(family.num_sites(), family.levels());
  std::vector<std::tuple<std::size_t, std::size_t, double>> jumps;
  for (std::size_t s = 0; s < chain.states.size(); ++s)
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto y = family.map(k).apply(chain.states[s]);
      const auto t = state_index(y);
      if (t != s) jumps.emplace_back(s, t, family.rate(k));
    }
  chain.generator = GeneratorMatrix(chain.states.size(), std::move(jumps));
  return chain;
}

DualChain build_dual_generator(const RatedFamily& family) { return build_dual_generator(family, dual_apply); }

DualChain build_dual_generator(const RatedFamily& family,
                               const std::function<Antichain(const LocalMap&, const Antichain&)>& dual) {
  DualChain chain;
  chain.states = enumerate_antichains(family.num_sites(), family.levels());
  for (std::size_t s = 0; s < chain.states.size(); ++s) chain.index.emplace(chain.states[s], s);
  std::vector<std::tuple<std::size_t, std::size_t, double>> jumps;
  for (std::size_t s = 0; s < chain.states.size(); ++s)
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto t = chain.index_of(dual(family.map(k), chain.states[s]));
      if (t != s) jumps.emplace_back(s, t, family.rate(k));
    }
  chain.generator = GeneratorMatrix(chain.states.size(), std::move(jumps));
  return chain;
}

std::vector<double> point_mass(std::size_t size, std::size_t at) {
  std::vector<double> v(size, 0.0);
  v.at(at) = 1.0;
  return v;
}

std::vector<double> transient_distribution(const GeneratorMatrix& Q, std::span<const double> initial, double t) {
  if (initial.size() != Q.size()) throw ConfigError("initial law has the wrong length");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("time must be finite and nonnegative");
  std::vector<double> v(initial.begin(), initial.end());
  const double q = Q.max_exit_rate();
  if (t == 0.0 || q == 0.0) return v;

  // P = I + Q/q; e^{tQ} = Σ_k Pois(qt; k) P^k, split into substeps with
  // q·dt ≤ 25 so e^{-q·dt} stays far from underflow.
  const auto steps = static_cast<std::uint64_t>(std::ceil(q * t / 25.0));
  const double lam = q * t / static_cast<double>(steps);
  std::vector<double> term(v.size()), acc(v.size()), qv(v.size());
  std::uint64_t iterations = 0;
  for (std::uint64_t step = 0; step < steps; ++step) {
    term = v;
    std::fill(acc.begin(), acc.end(), 0.0);
    double w = std::exp(-lam), cum = w;
    kernels::axpy(w, term, acc);
    for (std::uint64_t k = 1; 1.0 - cum >= 1e-13 && !(k > lam && w < 1e-18); ++k) {
      if (++iterations > kUniformizationCap)
        throw BudgetError("uniformization did not converge within the iteration cap");
      Q.left_multiply(term, qv);
      kernels::axpy(1.0 / q, qv, term);
      w *= lam / static_cast<double>(k);
      cum += w;
      kernels::axpy(w, term, acc);
    }
    v.swap(acc);
  }
  return v;
}

double semigroup_duality_check(const ForwardChain& fwd, const DualChain& dual, const Configuration& x,
                               const Antichain& Y, double t) {
  const auto px = transient_distribution(fwd.generator, point_mass(fwd.states.size(), fwd.index_of(x)), t);
  const auto pY = transient_distribution(dual.generator, point_mass(dual.states.size(), dual.index_of(Y)), t);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t s = 0; s < px.size(); ++s)
    if (psi_mon(fwd.states[s], Y)) lhs += px[s];
  for (std::size_t s = 0; s < pY.size(); ++s)
    if (psi_mon(x, dual.states[s])) rhs += pY[s];
  return std::abs(lhs - rhs);
}

double semigroup_duality_check(const RatedFamily& family, const Configuration& x, const Antichain& Y, double t) {
  return semigroup_duality_check(build_forward_generator(family), build_dual_generator(family), x, Y, t);
}

double exact_extinction_probability(const GeneratorMatrix& Q, std::span<const double> initial, double T,
                                    std::size_t absorbing) {
  if (absorbing >= Q.size() || !Q.is_absorbing(absorbing))
    throw ConfigError("extinction state is not absorbing in this generator");
  return transient_distribution(Q, initial, T)[absorbing];
}

FamilyPtr two_site_family(double alpha, double delta) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be finite and nonnegative");
  std::vector<RatedMap> maps;
  for (Site j = 0; j < 2; ++j) {
    const Site i = 1 - j;
    maps.push_back({LocalMap::death(j), delta});
    maps.push_back({LocalMap::branch(i, j), 1.0 - alpha});
    // Window (i, j); codes i·2 + j. Output keeps i and sets j to x(i) ∧ x(j).
    maps.push_back({LocalMap::custom({i, j}, {0b00, 0b00, 0b10, 0b11}, 1), alpha});
  }
  return std::make_shared<const RatedFamily>(2, Level{1}, std::move(maps), CoopParams{alpha, delta});
}

}  // namespace monodual
