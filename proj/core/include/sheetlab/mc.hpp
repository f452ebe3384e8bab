#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sheetlab/integrand.hpp"
#include "sheetlab/random_sources.hpp"

namespace sheetlab {

enum class KernelFamily { donsker, kac_stroock };

const char* to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

/// Substream labels reserved per purpose, so experiments sharing a master
/// seed stay independent.
namespace stream_label {
inline constexpr std::uint64_t lattice = 1;
inline constexpr std::uint64_t sheet = 2;
inline constexpr std::uint64_t fdd = 3;
inline constexpr std::uint64_t moments = 4;
inline constexpr std::uint64_t gof = 5;
inline constexpr std::uint64_t cramer_wold = 6;
inline constexpr std::uint64_t bound_scan = 7;
inline constexpr std::uint64_t parity = 8;
inline constexpr std::uint64_t cw_config = 9;
inline constexpr std::uint64_t appendix = 10;
}  // namespace stream_label

/// Runs body(begin, end, block_index) over fixed 4096-wide index blocks,
/// distributed across `workers` threads (0 = hardware concurrency). Block
/// boundaries do not depend on the worker count, so any derived randomness
/// and any per-index output are scheduling-independent.
void parallel_blocks(std::size_t count, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Deterministic pairwise sum / mean (order-fixed, drift-bounded).
double pairwise_sum(std::span<const double> xs);
double pairwise_mean(std::span<const double> xs);

/// x^k by repeated multiplication, exact operation order.
double pow_int(double x, int k);

/// One scalar Monte Carlo model: the integral of f against the chosen kernel
/// family at scale n. Replicate r is a pure function of (key.master, r).
struct IntegralModel {
  KernelFamily family;
  SimpleFunction f;
  int n;
  InnovationLaw law = InnovationLaw::rademacher;
};

/// reps integrals, replicate-parallel, deterministic for fixed (model, key)
/// regardless of worker count.
std::vector<double> simulate_integrals(const IntegralModel& model, const StreamKey& key,
                                       std::size_t reps, unsigned workers = 1,
                                       const Budgets& budgets = {});

}  // namespace sheetlab
