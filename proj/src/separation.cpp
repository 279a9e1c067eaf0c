#include "uentropy/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace uent {

double binary_entropy(double rho) {
  if (rho < -1e-15 || rho > 1.0 + 1e-15) {
    throw DomainError("binary entropy is defined on [0,1]");
  }
  rho = std::clamp(rho, 0.0, 1.0);
  if (rho == 0.0 || rho == 1.0) return 0.0;
  return -rho * std::log(rho) - (1.0 - rho) * std::log(1.0 - rho);
}

int hamming_distance(const Word& a, const Word& b) {
  if (a.size() != b.size()) throw ValidationError("hamming distance needs equal lengths");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

std::string HammingBallSize::exact_str() const {
  unsigned __int128 v = exact;
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

HammingBallSize hamming_ball_size(int n, int r, int k) {
  if (n < 0 || r < 0 || r > n) throw ValidationError("need 0 <= r <= n");
  if (k < 2) throw ValidationError("alphabet must have at least 2 symbols");
  // everything must fit in 128 bits: the ball is at most k^n
  if (n * std::log2(static_cast<double>(k)) > 120.0) {
    throw ValidationError("exact ball sizes limited to k^n < 2^120");
  }
  HammingBallSize out;
  unsigned __int128 binom = 1;   // C(n, i)
  unsigned __int128 powkr = 1;   // (k-1)^i
  double log_acc = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= r; ++i) {
    if (i > 0) {
      binom = binom * static_cast<unsigned>(n - i + 1) / static_cast<unsigned>(i);
      powkr *= static_cast<unsigned>(k - 1);
    }
    out.exact += binom * powkr;
    const double term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                        i * std::log(static_cast<double>(k - 1));
    const double m = std::max(log_acc, term);
    log_acc = m + std::log(std::exp(log_acc - m) + std::exp(term - m));
  }
  out.log_exact = log_acc;
  const double rho = n > 0 ? static_cast<double>(r) / n : 0.0;
  out.bound = std::exp(n * binary_entropy(rho) + r * std::log(static_cast<double>(k - 1)));
  return out;
}

// ---------------------------------------------------------------------------
// Hamming-separated subsets
// ---------------------------------------------------------------------------
std::vector<std::size_t> max_hamming_separated(const std::vector<Word>& words, int threshold) {
  std::vector<std::size_t> order(words.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (words[a] != words[b]) return lex_less(words[a], words[b]);
    return a < b;
  });
  std::vector<std::size_t> selected;
  if (threshold <= 0) {
    // distinct words are automatically pairwise separated
    std::set<Word> seen;
    for (std::size_t i : order) {
      if (seen.insert(words[i]).second) selected.push_back(i);
    }
    return selected;
  }
  for (std::size_t i : order) {
    bool ok = true;
    for (std::size_t j : selected) {
      if (hamming_distance(words[i], words[j]) <= threshold) {
        ok = false;
        break;
      }
    }
    if (ok) selected.push_back(i);
  }
  return selected;
}

namespace {

// Max independent set over a conflict adjacency, branch and bound; intended
// for <= 24 vertices.
std::vector<std::size_t> max_independent(const std::vector<std::uint32_t>& conflicts) {
  const int m = static_cast<int>(conflicts.size());
  std::uint32_t best_mask = 0;
  int best = 0;
  auto rec = [&](auto&& self, int v, std::uint32_t chosen, std::uint32_t banned, int count) -> void {
    if (count + (m - v) <= best) return;
    if (v == m) {
      if (count > best) {
        best = count;
        best_mask = chosen;
      }
      return;
    }
    if (!(banned & (1u << v))) {
      self(self, v + 1, chosen | (1u << v), banned | conflicts[v], count + 1);
    }
    self(self, v + 1, chosen, banned, count);
  };
  rec(rec, 0, 0u, 0u, 0);
  std::vector<std::size_t> out;
  for (int v = 0; v < m; ++v) {
    if (best_mask & (1u << v)) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> max_hamming_separated_exact(const std::vector<Word>& words,
                                                     int threshold) {
  if (words.size() > 24) {
    throw ValidationError("exact extraction is limited to 24 words");
  }
  std::vector<std::uint32_t> conflicts(words.size(), 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      if (hamming_distance(words[i], words[j]) <= threshold) {
        conflicts[i] |= (1u << j);
        conflicts[j] |= (1u << i);
      }
    }
  }
  return max_independent(conflicts);
}

// ---------------------------------------------------------------------------
// (rho, n, eps) u-separation
// ---------------------------------------------------------------------------
int SeparationConfig::required_indices() const {
  return std::max(1, static_cast<int>(std::ceil(rho * n - 1e-12)));
}

void SeparationConfig::validate() const {
  if (!(rho > 0.0 && rho <= 1.0)) throw ValidationError("rho must lie in (0,1]");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  if (n < 1) throw ValidationError("n must be at least 1");
}

int separated_index_count_words(const Word& a, const Word& b, int n, double eps, double base) {
  if (eps >= 1.0) return 0;
  // window width: d(sigma^j a, sigma^j b) > eps iff some disagreement falls
  // in [j, j + W)
  const double t = std::log(eps) / std::log(base);
  const double r = std::round(t);
  const int w = std::abs(t - r) <= 1e-9 ? static_cast<int>(r)
                                        : static_cast<int>(std::ceil(t));
  if (w <= 0) return 0;
  const std::size_t overlap = std::min(a.size(), b.size());
  std::vector<int> diffs;
  for (std::size_t i = 0; i < overlap; ++i) {
    if (a[i] != b[i]) diffs.push_back(static_cast<int>(i));
  }
  if (a.size() != b.size()) diffs.push_back(static_cast<int>(overlap));
  int count = 0;
  std::size_t ptr = 0;
  for (int j = 0; j < n; ++j) {
    while (ptr < diffs.size() && diffs[ptr] < j) ++ptr;
    if (ptr < diffs.size() && diffs[ptr] < j + w) ++count;
  }
  return count;
}

int separated_index_count(const BowenSpace& space, std::size_t i, std::size_t j, int n,
                          double eps) {
  if (const auto* sym = dynamic_cast<const SymbolicSample*>(&space)) {
    return separated_index_count_words(sym->words()[i], sym->words()[j], n, eps,
                                       sym->system().metric_base);
  }
  const auto* leaf = dynamic_cast<const ToralLeafSample*>(&space);
  if (!leaf) throw ValidationError("unsupported sample kind");
  const double gap = std::abs(leaf->params()[i] - leaf->params()[j]);
  if (gap == 0.0) return 0;
  if (gap > eps) return n;
  // lambda^j * gap > eps from j0 on
  const double l0 = std::log(eps / gap) / std::log(leaf->lambda_u());
  const int j0 = static_cast<int>(std::floor(l0)) + 1;
  return std::max(0, n - j0);
}

bool WeakStarNeighborhood::contains(const DynSystem& sys, const PointView& p, int n) const {
  for (std::size_t i = 0; i < family.fns.size(); ++i) {
    double avg;
    if (p.word) {
      avg = birkhoff_average(sys, family.fns[i], Point(*p.word), n);
    } else {
      avg = birkhoff_average(sys, family.fns[i], Point(*p.coords), n);
    }
    if (!(std::abs(avg - center[i]) < tau)) return false;
  }
  return true;
}

RhoSeparatedResult rho_separated_count(const DynSystem& sys, const SubsetSample& sample,
                                       const std::optional<WeakStarNeighborhood>& F,
                                       const SeparationConfig& cfg) {
  cfg.validate();
  RhoSeparatedResult res;
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!F || F->contains(sys, sample.space->point(i), cfg.n)) members.push_back(i);
  }
  if (members.empty()) {
    res.flags.push_back(kFlagNeighborhoodEmpty);
    return res;
  }
  const int required = cfg.required_indices();
  auto separated = [&](std::size_t a, std::size_t b) {
    return separated_index_count(*sample.space, a, b, cfg.n, cfg.eps) >= required;
  };
  if (members.size() <= 24) {
    std::vector<std::uint32_t> conflicts(members.size(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (!separated(members[i], members[j])) {
          conflicts[i] |= (1u << j);
          conflicts[j] |= (1u << i);
        }
      }
    }
    for (std::size_t v : max_independent(conflicts)) res.witnesses.push_back(members[v]);
    res.exact = true;
  } else {
    for (std::size_t i : members) {
      bool ok = true;
      for (std::size_t j : res.witnesses) {
        if (!separated(i, j)) {
          ok = false;
          break;
        }
      }
      if (ok) res.witnesses.push_back(i);
    }
  }
  res.count = res.witnesses.size();
  return res;
}

// ---------------------------------------------------------------------------
// separation-rate quantities
// ---------------------------------------------------------------------------
SQuantities s_quantities_symbolic(const SymbolicSystem& sys, const std::vector<int>& v,
                                  double center, const std::vector<double>& taus,
                                  const std::vector<int>& n_schedule) {
  if (taus.empty() || n_schedule.empty()) throw ValidationError("schedules must be nonempty");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (taus[i] >= taus[i - 1]) throw ValidationError("tau schedule must shrink");
  }
  SQuantities out;
  out.exact = true;
  for (double tau : taus) {
    std::vector<double> rates;
    for (int n : n_schedule) {
      const int lo = static_cast<int>(std::floor(n * (center - tau) + 1e-9)) + 1;
      const int hi = static_cast<int>(std::ceil(n * (center + tau) - 1e-9)) - 1;
      if (lo > hi) continue;
      const double lc = log_constrained_count(sys, v, n, lo, hi);
      if (lc == -std::numeric_limits<double>::infinity()) continue;
      rates.push_back(lc / n);
    }
    SQuantities::PerTau row{tau, 0.0, 0.0};
    if (!rates.empty()) {
      const std::size_t tail = std::max<std::size_t>(1, (rates.size() + 1) / 2);
      row.lower_slope = *std::min_element(rates.end() - tail, rates.end());
      row.upper_slope = *std::max_element(rates.end() - tail, rates.end());
    }
    out.per_tau.push_back(row);
  }
  out.s_lower = out.per_tau.back().lower_slope;
  out.s_upper = out.per_tau.back().upper_slope;
  return out;
}

// ---------------------------------------------------------------------------
// gluing
// ---------------------------------------------------------------------------
namespace {

// interior paths of exactly g symbols joining a to b; lexicographically
// smallest one
std::optional<Word> interior_path(const SymbolicSystem& sys, Symbol a, Symbol b, int g) {
  if (g == 0) return sys.allowed(a, b) ? std::optional<Word>(Word{}) : std::nullopt;
  // reach[j][c]: c can reach b with exactly j more interior symbols
  std::vector<std::vector<char>> reach(g + 1, std::vector<char>(sys.alphabet_size, 0));
  for (int c = 0; c < sys.alphabet_size; ++c) {
    reach[0][c] = sys.allowed(static_cast<Symbol>(c), b);
  }
  for (int j = 1; j <= g; ++j) {
    for (int c = 0; c < sys.alphabet_size; ++c) {
      for (int d = 0; d < sys.alphabet_size; ++d) {
        if (sys.allowed(static_cast<Symbol>(c), static_cast<Symbol>(d)) && reach[j - 1][d]) {
          reach[j][c] = 1;
          break;
        }
      }
    }
  }
  Word path;
  Symbol cur = a;
  for (int j = g; j >= 1; --j) {
    bool found = false;
    for (int c = 0; c < sys.alphabet_size; ++c) {
      if (sys.allowed(cur, static_cast<Symbol>(c)) && reach[j - 1][c]) {
        path.push_back(static_cast<Symbol>(c));
        cur = static_cast<Symbol>(c);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return path;
}

}  // namespace

GluingResult glue_orbits(const SymbolicSystem& sys, const GluingPlan& plan) {
  if (plan.blocks.empty()) throw ValidationError("gluing plans need at least one block set");
  for (const auto& set : plan.blocks) {
    if (set.empty()) throw ValidationError("block sets must be nonempty");
    for (const auto& w : set) {
      if (w.empty() || !sys.admissible(w)) {
        throw ValidationError("block words must be nonempty and admissible");
      }
      if (w.size() != set.front().size()) {
        throw ValidationError("block words must have uniform length within a set");
      }
    }
  }

  GluingResult res;
  res.expected = 1;
  for (const auto& set : plan.blocks) res.expected *= set.size();

  // fixed bridge length: smallest g such that every seam pair joins
  int g = 0;
  bool need_bridge = false;
  for (std::size_t j = 0; j + 1 < plan.blocks.size(); ++j) {
    for (const auto& u : plan.blocks[j]) {
      for (const auto& w : plan.blocks[j + 1]) {
        if (!sys.allowed(u.back(), w.front())) need_bridge = true;
      }
    }
  }
  if (need_bridge) {
    const auto power = sys.primitivity_power();
    if (!power) {
      throw ValidationError("not_mixing: bridged gluing needs a primitive transition matrix");
    }
    for (g = 1; g <= *power; ++g) {
      bool all = true;
      for (std::size_t j = 0; j + 1 < plan.blocks.size() && all; ++j) {
        for (const auto& u : plan.blocks[j]) {
          for (const auto& w : plan.blocks[j + 1]) {
            if (!interior_path(sys, u.back(), w.front(), g)) {
              all = false;
              break;
            }
          }
          if (!all) break;
        }
      }
      if (all) break;
    }
  }

  for (int attempt_g = g;; ++attempt_g) {
    res.words.clear();
    res.bridge_length = attempt_g;
    std::vector<std::size_t> idx(plan.blocks.size(), 0);
    while (true) {
      Word glued;
      for (std::size_t j = 0; j < plan.blocks.size(); ++j) {
        const Word& block = plan.blocks[j][idx[j]];
        if (!glued.empty()) {
          const auto b = interior_path(sys, glued.back(), block.front(), attempt_g);
          if (!b) throw ValidationError("no admissible bridge at a gluing seam");
          glued.insert(glued.end(), b->begin(), b->end());
        }
        glued.insert(glued.end(), block.begin(), block.end());
      }
      res.words.push_back(std::move(glued));
      // next combination
      std::size_t j = 0;
      while (j < idx.size() && ++idx[j] == plan.blocks[j].size()) {
        idx[j] = 0;
        ++j;
      }
      if (j == idx.size()) break;
    }
    std::set<Word> uniq(res.words.begin(), res.words.end());
    if (uniq.size() == res.expected) break;
    if (attempt_g > g + 8) throw ValidationError("bridge collisions persist");
  }
  res.cardinality_ok = true;
  res.glued_length = static_cast<int>(res.words.front().size());

  // exhaustive pair check of the claimed separation
  res.required_indices = std::max(
      1, static_cast<int>(std::ceil(plan.rho_star * res.glued_length - 1e-12)));
  res.min_separated_indices = res.glued_length;
  res.separation_ok = true;
  for (std::size_t i = 0; i < res.words.size(); ++i) {
    for (std::size_t j = i + 1; j < res.words.size(); ++j) {
      const int c = separated_index_count_words(res.words[i], res.words[j], res.glued_length,
                                                plan.eps_star, sys.metric_base);
      res.min_separated_indices = std::min(res.min_separated_indices, c);
      if (c < res.required_indices) res.separation_ok = false;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// uniform separation
// ---------------------------------------------------------------------------
namespace {

// largest rho* on a 1e-3 grid satisfying the separation budget at (kappa,
// kappa'), if any
std::optional<double> feasible_rho(double kappa, double kappa_prime, int k) {
  const double logk = std::log(2.0 * k - 1.0);
  double best = -1.0;
  for (int i = 1; i <= 1000; ++i) {
    const double rho = i * 1e-3;
    if (2.0 * kappa_prime + rho >= 0.5) break;
    const double x = rho + 2.0 * kappa_prime;
    if (x >= 1.0) break;
    if (binary_entropy(x) + x * logk < kappa - kappa_prime) best = rho;
  }
  if (best < 0.0) return std::nullopt;
  return best;
}

}  // namespace

UniformSeparationProbe uniform_separation_probe(const SymbolicSystem& sys,
                                                const MarkovChain& mu, double kappa, int n) {
  if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");
  if (n < 1 || n > 22) throw ValidationError("desk probes enumerate words; keep n <= 22");
  mu.validate(sys);

  UniformSeparationProbe probe;
  probe.kappa = kappa;
  probe.n = n;
  probe.h_mu = mu.entropy_rate();
  probe.target = probe.h_mu - kappa;

  // scan kappa' from the largest feasible value down a 1e-3 grid
  const int k = sys.alphabet_size;
  for (int i = static_cast<int>(kappa / 1e-3) - 1; i >= 1; --i) {
    const double kp = i * 1e-3;
    if (auto rho = feasible_rho(kappa, kp, k)) {
      probe.kappa_prime = kp;
      probe.rho_star = *rho;
      probe.feasible = true;
      break;
    }
  }
  if (!probe.feasible) {
    // smallest kappa for which some (kappa', rho*) works on the grids
    for (double cand = 1e-2; cand <= 3.0; cand += 1e-2) {
      bool ok = false;
      for (int i = static_cast<int>(cand / 1e-3) - 1; i >= 1 && !ok; --i) {
        if (feasible_rho(cand, i * 1e-3, k)) ok = true;
      }
      if (ok) {
        probe.min_feasible_kappa = cand;
        break;
      }
    }
    return probe;
  }

  // mu-typical words and their Hamming-separated extraction
  const double floor_weight = -static_cast<double>(n) * (probe.h_mu + probe.kappa_prime);
  std::vector<Word> typical;
  for (auto& w : sys.enumerate_words(n)) {
    const double lw = mu.cylinder_weight(w) > 0.0 ? mu.log_cylinder_weight(w)
                                                  : -std::numeric_limits<double>::infinity();
    if (lw >= floor_weight) typical.push_back(std::move(w));
  }
  probe.typical_count = typical.size();
  const double cut = n * (2.0 * probe.kappa_prime + probe.rho_star);
  probe.hamming_threshold = static_cast<int>(std::floor(cut + 1e-12));
  const auto xi = max_hamming_separated(typical, probe.hamming_threshold);
  probe.separated_count = xi.size();
  probe.achieved = probe.separated_count > 0
                       ? std::log(static_cast<double>(probe.separated_count)) / n
                       : -std::numeric_limits<double>::infinity();
  probe.pass = probe.achieved >= probe.target - 1e-12;
  return probe;
}

}  // namespace uent
