#include "lwr/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lwr/parallel.hpp"

namespace lwr {

Chromosome Chromosome::identity(std::size_t n_movers, std::size_t n_signals) {
  Chromosome ch;
  ch.n_movers = n_movers;
  ch.n_signals = n_signals;
  ch.genes.assign(n_movers + 2 * n_signals, 0.0);
  for (std::size_t s = 0; s < n_signals; ++s) {
    ch.genes[n_movers + 2 * s] = 1.0;
    ch.genes[n_movers + 2 * s + 1] = 1.0;
  }
  return ch;
}

Scenario decode(const Chromosome& ch, const Scenario& base) {
  if (ch.n_movers != base.movers.size() || ch.n_signals != base.signals.size())
    throw std::invalid_argument("decode: chromosome layout mismatch");
  Scenario sc = base;
  for (std::size_t i = 0; i < sc.movers.size(); ++i) {
    double t = sc.movers[i].t_entry + ch.entry_offset(i);
    sc.movers[i].t_entry = std::clamp(t, 0.0, sc.domain.t_end);
  }
  for (std::size_t s = 0; s < sc.signals.size(); ++s) {
    TrafficSignalSpec& sig = sc.signals[s];
    const double base_ratio = base.signals[s].green / base.signals[s].cycle;
    sig.cycle = base.signals[s].cycle * ch.cycle_scale(s);
    sig.green = base.signals[s].green * ch.green_scale(s);
    // Repair the coupling by falling back to the baseline duty ratio.
    if (!(sig.green < sig.cycle)) sig.green = sig.cycle * base_ratio;
  }
  return sc;
}

double fitness_outflow(const Chromosome& ch, const Scenario& base, double dt) {
  const Scenario sc = decode(ch, base);
  MoskowitzSolution sol = build_solution(sc);
  propagate_all(sc.movers, sc.signals, sol, sc.lanes, dt, sc.domain.t_end);
  return sol.evaluate(sc.domain.xn, sc.domain.t_end).value;
}

double total_delay(const Scenario& sc, const MultiResult& result) {
  double delay = 0.0;
  const double t_end = sc.domain.t_end;
  for (std::size_t i = 0; i < sc.movers.size(); ++i) {
    const MovingBottleneckSpec& m = sc.movers[i];
    if (m.t_entry >= t_end) continue;  // never entered
    const MoverResult& mr = result.movers[i];
    if (mr.exited_by_position) {
      delay += (mr.final_t - m.t_entry) - (m.x_exit - m.x_entry) / m.v_max;
    } else {
      delay += (t_end - m.t_entry) - (mr.final_x - m.x_entry) / m.v_max;
    }
  }
  return delay;
}

double fitness_delay(const Chromosome& ch, const Scenario& base, double dt) {
  const Scenario sc = decode(ch, base);
  MoskowitzSolution sol = build_solution(sc);
  const MultiResult result =
      propagate_all(sc.movers, sc.signals, sol, sc.lanes, dt, sc.domain.t_end);
  return total_delay(sc, result);
}

std::size_t tournament_select(const std::vector<double>& fitnesses, int k,
                              bool maximize, std::mt19937_64& rng) {
  const std::size_t n = fitnesses.size();
  if (n == 0) throw std::invalid_argument("tournament_select: empty population");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw std::invalid_argument("tournament_select: k outside [1, population]");
  // Entrants are drawn without replacement, so a full-size tournament
  // always returns the global best.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::size_t best = 0;
  bool have_best = false;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
    const std::size_t cand = idx[i];
    const bool better = !have_best || (maximize ? fitnesses[cand] > fitnesses[best]
                                                : fitnesses[cand] < fitnesses[best]);
    if (better) {
      best = cand;
      have_best = true;
    }
  }
  return best;
}

std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a,
                                                      const Chromosome& b,
                                                      std::mt19937_64& rng) {
  if (a.genes.size() != b.genes.size() || a.n_movers != b.n_movers ||
      a.n_signals != b.n_signals)
    throw std::invalid_argument("one_point_crossover: layout mismatch");
  Chromosome c1 = a;
  Chromosome c2 = b;
  if (a.genes.size() < 2) return {c1, c2};
  std::uniform_int_distribution<std::size_t> pick(1, a.genes.size() - 1);
  const std::size_t cut = pick(rng);
  for (std::size_t i = cut; i < a.genes.size(); ++i) {
    c1.genes[i] = b.genes[i];
    c2.genes[i] = a.genes[i];
  }
  return {c1, c2};
}

namespace {

double sample_gene(std::size_t index, std::size_t n_movers,
                   const GABounds& bounds, std::mt19937_64& rng) {
  if (index < n_movers) {
    std::uniform_real_distribution<double> dist(-bounds.entry_offset_bound,
                                                bounds.entry_offset_bound);
    return dist(rng);
  }
  std::uniform_real_distribution<double> dist(1.0 - bounds.timing_scale_bound,
                                              1.0 + bounds.timing_scale_bound);
  return dist(rng);
}

}  // namespace

Chromosome mutate(const Chromosome& ch, double p_m, const GABounds& bounds,
                  std::mt19937_64& rng) {
  if (p_m < 0.0 || p_m > 1.0)
    throw std::invalid_argument("mutate: p_m outside [0, 1]");
  Chromosome out = ch;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < out.genes.size(); ++i)
    if (coin(rng) < p_m) out.genes[i] = sample_gene(i, ch.n_movers, bounds, rng);
  return out;
}

FitnessReport run_ga(const GAConfig& cfg, const Scenario& base,
                     Objective objective, double dt) {
  if (cfg.population < 2)
    throw std::invalid_argument("run_ga: population must be >= 2");
  if (cfg.tournament < 1 || cfg.tournament > cfg.population)
    throw std::invalid_argument("run_ga: tournament size outside [1, population]");
  if (cfg.elitism < 0 || cfg.elitism >= cfg.population)
    throw std::invalid_argument("run_ga: elitism outside [0, population)");

  const auto start = std::chrono::steady_clock::now();
  const bool maximize = objective == Objective::Outflow;
  const std::size_t n_m = base.movers.size();
  const std::size_t n_s = base.signals.size();

  std::mt19937_64 rng(cfg.seed);
  std::vector<Chromosome> pop;
  pop.reserve(cfg.population);
  pop.push_back(Chromosome::identity(n_m, n_s));
  while (pop.size() < static_cast<std::size_t>(cfg.population)) {
    Chromosome ch = Chromosome::identity(n_m, n_s);
    for (std::size_t g = 0; g < ch.genes.size(); ++g)
      ch.genes[g] = sample_gene(g, n_m, cfg.bounds, rng);
    pop.push_back(std::move(ch));
  }

  auto evaluate_all = [&](const std::vector<Chromosome>& xs) {
    std::vector<double> fit(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      fit[i] = objective == Objective::Outflow
                   ? fitness_outflow(xs[i], base, dt)
                   : fitness_delay(xs[i], base, dt);
    });
    return fit;
  };

  FitnessReport report;
  report.best = pop.front();
  report.best_fitness = maximize ? -kUnreached : kUnreached;

  for (int gen = 0; gen < cfg.generations; ++gen) {
    const std::vector<double> fit = evaluate_all(pop);
    if (gen == 0) report.baseline_fitness = fit.front();

    std::size_t arg_best = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < fit.size(); ++i) {
      sum += fit[i];
      const bool better =
          maximize ? fit[i] > fit[arg_best] : fit[i] < fit[arg_best];
      if (better) arg_best = i;
    }
    report.history.push_back(
        GenerationStat{fit[arg_best], sum / static_cast<double>(fit.size())});
    const bool improved = maximize ? fit[arg_best] > report.best_fitness
                                   : fit[arg_best] < report.best_fitness;
    if (improved) {
      report.best_fitness = fit[arg_best];
      report.best = pop[arg_best];
    }
    if (gen + 1 == cfg.generations) break;

    // Breed the next generation: elites first, then crossover + mutation.
    std::vector<Chromosome> next;
    next.reserve(pop.size());
    std::vector<std::size_t> ranked(pop.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = i;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) {
                       return maximize ? fit[a] > fit[b] : fit[a] < fit[b];
                     });
    for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[ranked[e]]);
    while (next.size() < pop.size()) {
      const Chromosome& p1 = pop[tournament_select(fit, cfg.tournament, maximize, rng)];
      const Chromosome& p2 = pop[tournament_select(fit, cfg.tournament, maximize, rng)];
      auto [c1, c2] = one_point_crossover(p1, p2, rng);
      next.push_back(mutate(c1, cfg.mutation_prob, cfg.bounds, rng));
      if (next.size() < pop.size())
        next.push_back(mutate(c2, cfg.mutation_prob, cfg.bounds, rng));
    }
    pop = std::move(next);
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace lwr
