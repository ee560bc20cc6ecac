#include "rdo/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace rdo {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1u, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(workers, n); ++t) pool.emplace_back(work);
  }
  if (first_error) std::rethrow_exception(first_error);
}

DirectEvaluator::DirectEvaluator(const ProblemSpec& spec, unsigned threads)
    : spec_(&spec), threads_(threads == 0 ? 1 : threads) {}

std::vector<Evaluation> DirectEvaluator::evaluate(std::span<const Vector> xs) {
  std::vector<Evaluation> out(xs.size());
  parallel_for(xs.size(), threads_, [&](std::size_t i) { out[i].f = spec_->evaluate(xs[i]); });
  served_ += xs.size();
  return out;
}

} // namespace rdo
