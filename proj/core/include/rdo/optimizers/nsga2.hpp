#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rdo/evaluator.hpp"
#include "rdo/problem.hpp"

namespace rdo {

struct Nsga2Config {
  std::size_t population_size = 20;
  // Number of populations produced, the initial one included; 80 populations
  // of 20 cost 1600 requests. Values 0 and 1 both stop after the initial
  // population.
  std::size_t generations = 80;
  double crossover_prob = 0.9;
  double eta_crossover = 15.0;
  // Per-gene mutation probability; unset means 1/d.
  std::optional<double> mutation_prob;
  double eta_mutation = 20.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Nsga2Result {
  Population final_population;
  // Every individual returned by the evaluation channel, in request order.
  std::vector<Individual> archive;
  std::size_t requests = 0;
};

// Called once per generation after its batch has been evaluated.
using GenerationObserver = std::function<void(const Population& evaluated_batch)>;

Nsga2Result nsga2_run(const ProblemSpec& spec, const Nsga2Config& cfg, Evaluator& eval,
                      const GenerationObserver& observer = {});

// Survivor selection used by nsga2_run: the best `keep` indices of `costs` by
// (front rank, crowding distance desc, index).
std::vector<std::size_t> elitist_truncation(std::span<const Vector> costs, std::size_t keep);

} // namespace rdo
