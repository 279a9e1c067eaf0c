#include "uentropy/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uentropy/errors.hpp"

namespace uent {

PowerResult power_iteration(const std::vector<std::vector<double>>& m) {
  const int k = static_cast<int>(m.size());
  PowerResult res;
  res.vector.assign(k, 1.0);
  double prev = 0.0;
  for (int it = 0; it < 10000; ++it) {
    std::vector<double> next(k, 0.0);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) next[a] += m[a][b] * res.vector[b];
    }
    const double norm = *std::max_element(next.begin(), next.end());
    if (!(norm > 0.0)) throw ValidationError("power iteration hit the zero vector");
    for (double& x : next) x /= norm;
    res.vector.swap(next);
    res.iterations = it + 1;
    if (std::abs(norm - prev) <= 1e-12 * std::max(1.0, std::abs(norm))) {
      res.eigenvalue = norm;
      return res;
    }
    prev = norm;
  }
  res.eigenvalue = prev;
  return res;
}

MarkovChain MarkovChain::bernoulli(std::vector<double> probs) {
  MarkovChain c;
  const int k = static_cast<int>(probs.size());
  double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(sum > 0.0)) throw ValidationError("bernoulli weights must have positive mass");
  for (double& p : probs) p /= sum;
  c.initial = probs;
  c.rows.assign(k, probs);
  return c;
}

MarkovChain MarkovChain::parry(const SymbolicSystem& sys) {
  if (!sys.primitivity_power()) {
    throw ValidationError("not_irreducible: the transition matrix is not primitive");
  }
  const int k = sys.alphabet_size;
  std::vector<std::vector<double>> t(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> tt(k, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      t[a][b] = sys.transition[a][b];
      tt[b][a] = sys.transition[a][b];
    }
  }
  const auto right = power_iteration(t);
  const auto left = power_iteration(tt);
  const double lambda = right.eigenvalue;

  MarkovChain c;
  c.rows.assign(k, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (sys.transition[a][b] != 0) {
        c.rows[a][b] = t[a][b] * right.vector[b] / (lambda * right.vector[a]);
      }
    }
  }
  c.initial.assign(k, 0.0);
  double norm = 0.0;
  for (int a = 0; a < k; ++a) {
    c.initial[a] = left.vector[a] * right.vector[a];
    norm += c.initial[a];
  }
  for (double& p : c.initial) p /= norm;
  return c;
}

void MarkovChain::validate(const SymbolicSystem& sys) const {
  if (alphabet() != sys.alphabet_size) throw ValidationError("markov chain alphabet mismatch");
  double total = std::accumulate(initial.begin(), initial.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("initial distribution must sum to 1");
  for (int a = 0; a < alphabet(); ++a) {
    double row = 0.0;
    for (int b = 0; b < alphabet(); ++b) {
      if (rows[a][b] < 0) throw ValidationError("negative transition probability");
      if (rows[a][b] > 0 && !sys.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b))) {
        throw ValidationError("markov chain puts mass on a forbidden transition");
      }
      row += rows[a][b];
    }
    if (std::abs(row - 1.0) > 1e-9) {
      throw ValidationError("transition row " + std::to_string(a) + " must sum to 1");
    }
  }
}

double MarkovChain::cylinder_weight(std::span<const Symbol> w) const {
  if (w.empty()) return 1.0;
  double p = initial[w[0]];
  for (std::size_t i = 0; i + 1 < w.size(); ++i) p *= rows[w[i]][w[i + 1]];
  return p;
}

double MarkovChain::log_cylinder_weight(std::span<const Symbol> w) const {
  if (w.empty()) return 0.0;
  double lp = std::log(initial[w[0]]);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) lp += std::log(rows[w[i]][w[i + 1]]);
  return lp;
}

std::vector<double> MarkovChain::stationary() const {
  const int k = alphabet();
  std::vector<double> pi = initial;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> next(k, 0.0);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) next[b] += pi[a] * rows[a][b];
    }
    double diff = 0.0;
    for (int a = 0; a < k; ++a) diff = std::max(diff, std::abs(next[a] - pi[a]));
    pi.swap(next);
    if (diff < 1e-14) break;
  }
  return pi;
}

double MarkovChain::entropy_rate() const {
  const auto pi = stationary();
  double h = 0.0;
  for (int a = 0; a < alphabet(); ++a) {
    for (int b = 0; b < alphabet(); ++b) {
      const double p = rows[a][b];
      if (p > 0.0) h -= pi[a] * p * std::log(p);
    }
  }
  return h;
}

double MarkovChain::expected_value(const std::vector<double>& per_symbol) const {
  const auto pi = stationary();
  double m = 0.0;
  for (int a = 0; a < alphabet(); ++a) m += pi[a] * per_symbol[a];
  return m;
}

Word MarkovChain::sample_word(int length, std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Word w;
  w.reserve(length);
  auto draw = [&](const std::vector<double>& dist) -> Symbol {
    double u = unif(rng);
    double acc = 0.0;
    for (std::size_t a = 0; a < dist.size(); ++a) {
      acc += dist[a];
      if (u <= acc) return static_cast<Symbol>(a);
    }
    return static_cast<Symbol>(dist.size() - 1);
  };
  if (length <= 0) return w;
  w.push_back(draw(initial));
  for (int i = 1; i < length; ++i) w.push_back(draw(rows[w.back()]));
  return w;
}

}  // namespace uent
