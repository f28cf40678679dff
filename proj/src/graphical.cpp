#include "monodual/graphical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monodual {

bool SummabilityReport::finite() const noexcept {
  return std::isfinite(max_change_rate) && std::isfinite(max_inflow_rate) && std::isfinite(max_outflow_rate);
}

RatedFamily::RatedFamily(std::size_t num_sites, Level levels, std::vector<RatedMap> maps,
                         std::optional<CoopParams> params, std::shared_ptr<const Grid> grid)
    : num_sites_(num_sites), levels_(levels), params_(params), grid_(std::move(grid)) {
  if (levels == 0) throw ConfigError("local state space needs at least two states");
  if (grid_ && grid_->size() != num_sites) throw ConfigError("family site count differs from its grid");
  maps_.reserve(maps.size());
  for (auto& rm : maps) {
    if (!std::isfinite(rm.rate) || rm.rate < 0.0)
      throw ConfigError("rate of " + rm.map.to_string() + " must be finite and nonnegative");
    if (rm.rate == 0.0) continue;
    if (rm.map.max_site() >= num_sites) throw ConfigError("map " + rm.map.to_string() + " refers to sites off the grid");
    // Built-in kinds are monotone and fix 0̲ on every {0..n}; custom tables are checked.
    if (rm.map.kind() == MapKind::Custom) {
      if (rm.map.custom_levels() != levels) throw ConfigError("custom map state space differs from the family's");
      if (!rm.map.is_eligible(levels))
        throw ConfigError("map " + rm.map.to_string() + " is not monotone with m(0)=0");
    }
    const auto idx = static_cast<std::uint32_t>(maps_.size());
    if (!index_.emplace(rm.map, idx).second) throw ConfigError("duplicate map " + rm.map.to_string() + " in family");
    maps_.push_back(std::move(rm));
  }
  std::vector<double> weights;
  weights.reserve(maps_.size());
  for (const auto& rm : maps_) weights.push_back(rm.rate);
  sampler_ = AliasTable(weights);
  total_rate_ = sampler_.total();
}

std::uint32_t RatedFamily::sample_index(Rng& rng) const { return sampler_.sample(rng); }

std::optional<std::uint32_t> RatedFamily::find(const LocalMap& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SummabilityReport RatedFamily::summability() const {
  std::vector<double> change(num_sites_, 0.0), inflow(num_sites_, 0.0), outflow(num_sites_, 0.0);
  for (const auto& rm : maps_) {
    const auto& dep = rm.map.dependence();
    for (Site j : dep.changed) change[j] += rm.rate;
    for (const auto& [i, j] : dep.window_pairs) {
      if (i == j) continue;
      inflow[j] += rm.rate;
      outflow[i] += rm.rate;
    }
  }
  auto sup = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
  return {sup(change), sup(inflow), sup(outflow)};
}

bool RatedFamily::is_translation_invariant(const Grid& grid) const {
  if (grid.size() != num_sites_) return false;
  for (Site i = 0; i < grid.size(); ++i) {
    for (const auto& rm : maps_) {
      const LocalMap shifted = rm.map.relabeled([&](Site k) { return grid.mul(i, k); });
      const auto idx = find(shifted);
      if (!idx) return false;
      if (std::abs(maps_[*idx].rate - rm.rate) > 1e-12 * std::max(1.0, rm.rate)) return false;
    }
  }
  return true;
}

FamilyPtr cooperative_family(std::shared_ptr<const Grid> grid, double alpha, double delta) {
  if (!grid) throw ConfigError("cooperative family needs a grid");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be finite and nonnegative");
  std::vector<RatedMap> maps;
  const std::size_t n = grid->size();
  const double deg = static_cast<double>(grid->degree());
  const double bra_rate = (1.0 - alpha) / deg;
  const double coop_rate = alpha / (deg * (deg - 1.0));
  maps.reserve(n * (1 + grid->degree() * grid->degree()));
  for (Site j = 0; j < n; ++j) {
    if (delta > 0.0) maps.push_back({LocalMap::death(j), delta});
    if (bra_rate > 0.0)
      for (Site i : grid->neighbors(j)) maps.push_back({LocalMap::branch(i, j), bra_rate});
    if (coop_rate > 0.0)
      for (const auto& [i, i2] : grid->pair_neighbors(j)) maps.push_back({LocalMap::coop(i, i2, j), coop_rate});
  }
  return std::make_shared<const RatedFamily>(n, Level{1}, std::move(maps), CoopParams{alpha, delta}, grid);
}

FamilyPtr death_family(std::shared_ptr<const Grid> grid, double delta) {
  if (!grid) throw ConfigError("death family needs a grid");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("delta must be finite and nonnegative");
  std::vector<RatedMap> maps;
  for (Site j = 0; j < grid->size(); ++j) maps.push_back({LocalMap::death(j), delta});
  return std::make_shared<const RatedFamily>(grid->size(), Level{1}, std::move(maps), std::nullopt, grid);
}

EventLog::EventLog(FamilyPtr family, double start, double end, std::vector<Event> events, SeedProvenance provenance)
    : family_(std::move(family)), start_(start), end_(end), events_(std::move(events)), provenance_(provenance) {
  if (!family_) throw ConfigError("event log needs a family");
  if (!(start <= end)) throw ConfigError("event log window must satisfy start <= end");
  double prev = start;
  for (std::size_t k = 0; k < events_.size(); ++k) {
    const auto& e = events_[k];
    if (!(e.time > prev) || e.time > end)
      throw ConfigError("event times must be strictly increasing within the log window");
    if (e.map >= family_->size()) throw ConfigError("event refers to a map outside the family");
    prev = e.time;
  }
}

std::span<const Event> EventLog::between(double s, double t) const {
  if (s < start_ || t > end_ || s > t) {
    std::ostringstream os;
    os << "interval (" << s << ", " << t << "] is outside the log window (" << start_ << ", " << end_ << "]";
    throw ConfigError(os.str());
  }
  auto lo = std::upper_bound(events_.begin(), events_.end(), s, [](double v, const Event& e) { return v < e.time; });
  auto hi = std::upper_bound(lo, events_.end(), t, [](double v, const Event& e) { return v < e.time; });
  return {lo, hi};
}

EventStream::EventStream(const RatedFamily& family, double start, double end, Rng& rng)
    : family_(&family), time_(start), end_(end), rng_(&rng) {}

std::optional<Event> EventStream::next() {
  const double total = family_->total_rate();
  if (total <= 0.0 || time_ > end_) return std::nullopt;
  double t = time_ + rng_->exponential(total);
  // Float collisions get pushed to the next representable time so the
  // sequence stays strictly increasing.
  if (t <= time_) t = std::nextafter(time_, INFINITY);
  time_ = t;
  if (t > end_) return std::nullopt;
  return Event{t, family_->sample_index(*rng_)};
}

void check_event_budget(const RatedFamily& family, double start, double end) {
  const double expected = family.total_rate() * (end - start);
  if (expected > kEventBudget) {
    std::ostringstream os;
    os << "expected " << expected << " events exceeds the budget of " << kEventBudget;
    throw BudgetError(os.str());
  }
}

EventLog sample_event_log(FamilyPtr family, double start, double end, Rng& rng) {
  if (!family) throw ConfigError("event log needs a family");
  if (!(start < end)) throw ConfigError("event log window needs start < end");
  check_event_budget(*family, start, end);
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(family->total_rate() * (end - start) * 1.1) + 16);
  EventStream stream(*family, start, end, rng);
  while (auto e = stream.next()) events.push_back(*e);
  return EventLog(std::move(family), start, end, std::move(events), rng.provenance());
}

namespace {

void require_on_log(const EventLog& log, std::size_t num_sites, Level levels) {
  if (num_sites != log.family().num_sites() || levels != log.family().levels())
    throw ConfigError("configuration does not live on the log's grid");
}

}  // namespace

Configuration forward_flow(const EventLog& log, const Configuration& x, double s, double t) {
  require_on_log(log, x.num_sites(), x.levels());
  const auto events = log.between(s, t);
  if (x.levels() == 1) {
    SiteBits bits = SiteBits::from_config(x);
    for (const auto& e : events) log.family().map(e.map).apply_in_place(bits);
    return bits.to_config();
  }
  Configuration y = x;
  for (const auto& e : events) y = log.family().map(e.map).apply(y);
  return y;
}

void forward_flow_in_place(const EventLog& log, SiteBits& x, double s, double t) {
  require_on_log(log, x.num_sites(), Level{1});
  for (const auto& e : log.between(s, t)) log.family().map(e.map).apply_in_place(x);
}

CoupledLogs sample_coupled_logs(std::shared_ptr<const Grid> grid, CoopParams low, CoopParams high, double start,
                                double end, Rng& rng) {
  if (!grid) throw ConfigError("coupled logs need a grid");
  if (!(low.alpha <= high.alpha && low.delta <= high.delta))
    throw ConfigError("coupling needs alpha <= alpha' and delta <= delta'");
  if (!(start < end)) throw ConfigError("event log window needs start < end");
  auto low_family = cooperative_family(grid, low.alpha, low.delta);
  auto high_family = cooperative_family(grid, high.alpha, high.delta);
  check_event_budget(*high_family, start, end);
  check_event_budget(*low_family, start, end);

  enum Part : std::uint8_t { Death, ExtraDeath, Branch, Coop, ExtraCoop };
  struct Point {
    Part part;
    LocalMap map;
  };
  const double deg = static_cast<double>(grid->degree());
  const double r1 = deg, r2 = deg * (deg - 1.0);
  const double rates[5] = {low.delta, high.delta - low.delta, (1.0 - high.alpha) / r1, low.alpha / r2,
                           (high.alpha - low.alpha) / r2};
  std::vector<Point> points;
  std::vector<double> weights;
  for (Site j = 0; j < grid->size(); ++j) {
    for (Part p : {Death, ExtraDeath}) {
      if (rates[p] <= 0.0) continue;
      points.push_back({p, LocalMap::death(j)});
      weights.push_back(rates[p]);
    }
    if (rates[Branch] > 0.0)
      for (Site i : grid->neighbors(j)) {
        points.push_back({Branch, LocalMap::branch(i, j)});
        weights.push_back(rates[Branch]);
      }
    for (Part p : {Coop, ExtraCoop}) {
      if (rates[p] <= 0.0) continue;
      for (const auto& [i, i2] : grid->pair_neighbors(j)) {
        points.push_back({p, LocalMap::coop(i, i2, j)});
        weights.push_back(rates[p]);
      }
    }
  }
  const AliasTable table(weights);
  std::vector<Event> low_events, high_events;
  if (table.total() > 0.0) {
    double t = start;
    for (;;) {
      double next = t + rng.exponential(table.total());
      if (next <= t) next = std::nextafter(t, INFINITY);
      t = next;
      if (t > end) break;
      const Point& pt = points[table.sample(rng)];
      high_events.push_back({t, *high_family->find(pt.map)});
      switch (pt.part) {
        case Death:
        case Branch:
        case Coop:
          low_events.push_back({t, *low_family->find(pt.map)});
          break;
        case ExtraCoop:
          low_events.push_back({t, *low_family->find(LocalMap::branch(pt.map.source(), pt.map.target()))});
          break;
        case ExtraDeath:
          break;
      }
    }
  }
  return CoupledLogs{EventLog(low_family, start, end, std::move(low_events), rng.provenance()),
                     EventLog(high_family, start, end, std::move(high_events), rng.provenance())};
}

std::vector<Site> evolving_set(const EventLog& log, std::span<const Site> initial, double s, double t) {
  const std::size_t n = log.family().num_sites();
  std::vector<char> in(n, 0);
  for (Site i : initial) {
    if (i >= n) throw ConfigError("evolving set start contains off-grid sites");
    in[i] = 1;
  }
  std::vector<std::pair<Site, char>> updates;
  for (const auto& e : log.between(s, t)) {
    const auto& dep = log.family().map(e.map).dependence();
    // Sites outside D(m) keep their membership; j ∈ D(m) joins iff some
    // i ∈ ξ has (i, j) ∈ R(m).
    updates.clear();
    for (Site j : dep.changed) {
      char reached = 0;
      for (const auto& [a, b] : dep.window_pairs)
        if (b == j && in[a]) reached = 1;
      updates.emplace_back(j, reached);
    }
    for (const auto& [j, v] : updates) in[j] = v;
  }
  std::vector<Site> out;
  for (Site i = 0; i < n; ++i)
    if (in[i]) out.push_back(i);
  return out;
}

EventLog restrict_log(const EventLog& log, const std::function<bool(const LocalMap&)>& keep) {
  std::vector<Event> kept;
  for (const auto& e : log.events())
    if (keep(log.family().map(e.map))) kept.push_back(e);
  return EventLog(log.family_ptr(), log.start(), log.end(), std::move(kept), log.provenance());
}

}  // namespace monodual
