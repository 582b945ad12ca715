#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "lwr/scenario.hpp"

namespace lwr {

/// Decision vector: one entry-time offset per moving bottleneck, then a
/// (cycle_scale, green_scale) pair per signal. Stored flat so crossover and
/// mutation are uniform over genes.
struct Chromosome {
  std::size_t n_movers = 0;
  std::size_t n_signals = 0;
  std::vector<double> genes;  ///< size n_movers + 2*n_signals

  static Chromosome identity(std::size_t n_movers, std::size_t n_signals);
  double entry_offset(std::size_t mover) const { return genes[mover]; }
  double cycle_scale(std::size_t sig) const { return genes[n_movers + 2 * sig]; }
  double green_scale(std::size_t sig) const {
    return genes[n_movers + 2 * sig + 1];
  }
};

struct GABounds {
  double entry_offset_bound = 10.0;  ///< |offset| cap (s)
  double timing_scale_bound = 0.1;   ///< scales within [1 - b, 1 + b]
};

struct GAConfig {
  int population = 30;
  int generations = 20;
  int tournament = 10;
  double mutation_prob = 0.1;
  std::uint64_t seed = 0;
  GABounds bounds;
  int elitism = 1;
};

enum class Objective { Outflow, Delay };

struct GenerationStat {
  double best;
  double mean;
};

struct FitnessReport {
  std::vector<GenerationStat> history;  ///< one entry per generation
  Chromosome best;
  double best_fitness = 0.0;
  double baseline_fitness = 0.0;  ///< fitness of the identity chromosome
  double wall_time_s = 0.0;
};

/// Applies the chromosome to the base scenario: shifted entry times
/// (clamped to [0, T]), rescaled cycles and greens. Violations of
/// green < cycle are repaired by restoring the baseline green/cycle ratio.
Scenario decode(const Chromosome& ch, const Scenario& base);

/// Cumulative count at the link exit at the horizon, after propagating all
/// bottlenecks of the decoded scenario.
double fitness_outflow(const Chromosome& ch, const Scenario& base, double dt);

/// Total bottleneck delay: actual travel time minus free-flow travel time,
/// summed over movers; movers still en route at the horizon contribute
/// elapsed time minus covered distance over v_max.
double fitness_delay(const Chromosome& ch, const Scenario& base, double dt);

/// Delay computed from an existing multi-bottleneck result.
double total_delay(const Scenario& sc, const MultiResult& result);

/// Index of the best of k uniformly sampled individuals.
std::size_t tournament_select(const std::vector<double>& fitnesses, int k,
                              bool maximize, std::mt19937_64& rng);

/// Swaps suffixes at a uniform cut in [1, len - 1].
std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a,
                                                      const Chromosome& b,
                                                      std::mt19937_64& rng);

/// Resamples each gene within its bounds with probability p_m.
Chromosome mutate(const Chromosome& ch, double p_m, const GABounds& bounds,
                  std::mt19937_64& rng);

/// Generational GA with tournament selection, one-point crossover, uniform
/// mutation and elitism. The identity chromosome is force-included in the
/// initial population, so with elitism the best fitness never falls below
/// the baseline. Deterministic for a fixed seed.
FitnessReport run_ga(const GAConfig& cfg, const Scenario& base,
                     Objective objective, double dt);

}  // namespace lwr
