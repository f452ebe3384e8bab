#include "sheetlab/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "sheetlab/donsker.hpp"
#include "sheetlab/kac_stroock.hpp"

namespace sheetlab {

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::donsker: return "donsker";
    case KernelFamily::kac_stroock: return "kac-stroock";
  }
  return "?";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "donsker") return KernelFamily::donsker;
  if (name == "kac-stroock") return KernelFamily::kac_stroock;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

namespace {
constexpr std::size_t kBlock = 4096;
}

void parallel_blocks(std::size_t count, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  unsigned n_threads = workers == 0 ? std::thread::hardware_concurrency() : workers;
  if (n_threads == 0) n_threads = 1;
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, blocks));

  if (n_threads == 1) {
    for (std::size_t b = 0; b < blocks; ++b)
      body(b * kBlock, std::min(count, (b + 1) * kBlock), b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    try {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= blocks) return;
        body(b * kBlock, std::min(count, (b + 1) * kBlock), b);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double pairwise_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

double pow_int(double x, int k) {
  if (k < 0) throw std::invalid_argument("pow_int requires k >= 0");
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

std::vector<double> simulate_integrals(const IntegralModel& model, const StreamKey& key,
                                       std::size_t reps, unsigned workers,
                                       const Budgets& budgets) {
  if (model.n < 1) throw std::invalid_argument("kernel scale n must be >= 1");
  std::vector<double> out(reps);

  if (model.family == KernelFamily::donsker) {
    const DonskerIntegrator integrator(model.f, model.n, budgets);
    parallel_blocks(reps, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
      std::vector<double> z(integrator.cell_count());
      for (std::size_t r = begin; r < end; ++r) {
        Rng rng(StreamKey{key.master, r, key.substream});
        fill_innovations(z, model.law, rng);
        out[r] = integrator.apply(z);
      }
    });
    return out;
  }

  const double intensity = static_cast<double>(model.n);
  parallel_blocks(reps, workers, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t r = begin; r < end; ++r) {
      const StreamKey rep_key{key.master, r, key.substream};
      KacStroockKernel kernel(sample_poisson_sheet(intensity, model.f.box(), rep_key, budgets),
                              budgets);
      out[r] = kernel.integrate(model.f);
    }
  });
  return out;
}

}  // namespace sheetlab
