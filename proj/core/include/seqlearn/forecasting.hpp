#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqlearn/bitstring.hpp"
#include "seqlearn/measures.hpp"
#include "seqlearn/rational.hpp"
#include "seqlearn/stream.hpp"
#include "seqlearn/verdict.hpp"

namespace seqlearn {

// forecast-vs-source gaps along one realized path; gaps[t-1] is the gap in the
// two next-bit conditionals after t-1 bits of the path, t = 1..horizon
struct GapTrajectory {
    std::uint64_t seed = 0;
    std::uint64_t horizon = 0;
    Rational eps;
    std::vector<Rational> gaps;
    std::vector<std::uint64_t> checkpoints;
    std::vector<Rational> at_checkpoint;  // gap at each checkpoint time
    std::vector<Rational> segment_max;    // max gap over times in (c_{i-1}, c_i]
    std::vector<Rational> density;        // good-time density up to each checkpoint
    Rational good_density;              // at the horizon
    std::vector<std::uint64_t> tail_violations;  // times past horizon - tail with gap >= eps
};

struct NcReport {
    std::string criterion;
    std::uint64_t horizon = 0;
    std::uint64_t tail = 0;
    Rational eps;
    Rational r{1};
    Rational tol{0};
    std::vector<std::uint64_t> checkpoints;
    std::vector<GapTrajectory> trajectories;
    std::vector<Verdict> per_seed;
    Verdict verdict = Verdict::inconclusive;
};

// total variation between the two laws' depth-d cylinder algebras given a prefix
struct MergeReport {
    std::uint64_t seed = 0;
    std::uint64_t depth = 0;
    std::vector<std::uint64_t> checkpoints;
    std::vector<Rational> values;
};

struct StrongNcReport {
    std::string criterion;
    std::uint64_t horizon = 0;
    std::uint64_t tail = 0;
    std::uint64_t depth = 0;
    Rational eps;
    std::vector<std::uint64_t> checkpoints;
    std::vector<MergeReport> trajectories;
    std::vector<Verdict> per_seed;
    Verdict verdict = Verdict::inconclusive;
    std::string caveat;  // the depth-d value only bounds the full supremum from below
};

GapTrajectory gap_trajectory(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                             const BitString& sigma, const Rational& eps,
                             std::size_t checkpoint_count = 16);

// mu forecasts paths sampled from lambda; seeds drive the sampler
NcReport check_nc(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                  const std::vector<std::uint64_t>& seeds, std::uint64_t horizon,
                  const Rational& eps, std::uint64_t tail = 0, std::size_t checkpoint_count = 16);

// density flavor: small-gap density must clear r - tol across the last three checkpoints
NcReport check_weak_nc(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                       const std::vector<std::uint64_t>& seeds, std::uint64_t horizon,
                       const Rational& eps, const Rational& r,
                       const Rational& tol = Rational(1, 100), std::size_t checkpoint_count = 16);

Rational merge_depth(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                     const BitString& prefix, std::uint64_t d, std::uint64_t d_max = 10);

StrongNcReport check_strong_nc(const ConditionalLaw& mu, const ConditionalLaw& lambda,
                               const std::vector<std::uint64_t>& seeds, std::uint64_t horizon,
                               std::uint64_t d, const Rational& eps, std::uint64_t tail = 0,
                               std::size_t checkpoint_count = 16);

// 1^{n_1}.0.1^{n_2}.0..., n_j the least n > 2^j whose all-ones extension pushes
// nu's next-one chance above 9/10; each block search tries at most `budget` lengths
BitStream defeat_nc(const ConditionalLaw& nu, std::uint64_t budget = std::uint64_t{1} << 20);

}  // namespace seqlearn
