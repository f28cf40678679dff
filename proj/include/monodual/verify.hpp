#pragma once

// The invariant battery behind `monodual verify`: pathwise duality on random
// triples, closed-form against generic dual maps, coupled dominance, and the
// exact semigroup identity on tiny systems. Every check is exact; a failure
// comes with a reproducer.

#include <cstdint>
#include <string>
#include <vector>

#include "monodual/antichain.hpp"
#include "monodual/dual.hpp"
#include "monodual/graphical.hpp"
#include "monodual/rng.hpp"

namespace monodual {

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::uint64_t triples = 2000;
  std::uint64_t coupling_reps = 500;
  bool exact_only = false;
  // Swap the branching dual for a mutated formula; the battery must catch it.
  bool inject_fault = false;
  unsigned threads = 1;
};

struct CheckOutcome {
  std::string name;
  bool passed;
  std::uint64_t cases;
  std::string detail;      // summary line
  std::string reproducer;  // empty when passed
};

struct VerifyReport {
  std::vector<CheckOutcome> checks;
  bool passed() const noexcept;
};

VerifyReport run_verification(const VerifyOptions& options);

// The mutated branching dual used by fault injection: forgets to remove j.
Antichain faulty_dual_apply(const LocalMap& m, const Antichain& Y);

// Random test inputs shared by the battery and the test suites.
Configuration random_configuration(std::size_t num_sites, Level levels, double density, Rng& rng);
// Up to `max_elements` random elements of support ≤ `max_support`,
// minimalized; sometimes ∅ or Y_top.
Antichain random_antichain(std::size_t num_sites, std::size_t max_elements, std::size_t max_support, Rng& rng);

// One pathwise triple on torus(2,6): log of horizon 5 at (α, δ), a random x and Y.
struct DualityTriple {
  EventLog log;
  Configuration x;
  Antichain Y;
};
DualityTriple duality_triple(std::uint64_t seed, std::uint64_t index, double alpha, double delta);

// ψ(X_{0,5}(x), Y) == ψ(x, Y_{5,0}(Y)), the dual side run on the engine.
// `max_dual_size` receives the largest intermediate dual state.
bool triple_duality_holds(const DualityTriple& t, std::size_t* max_dual_size = nullptr);

// Engine states up to this size are also replayed through the reference
// (Antichain-level, quadratic) fold in the pathwise check.
inline constexpr std::size_t kReferenceFoldCap = 128;

}  // namespace monodual
