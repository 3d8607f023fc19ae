#include "metaffine/symexpr.hpp"

#include <cmath>

namespace maf {

const char *zero_kind_name(ZeroKind k) noexcept {
  switch (k) {
  case ZeroKind::ProvenZero: return "proven-zero";
  case ZeroKind::ProbablyZero: return "probably-zero";
  case ZeroKind::Nonzero: return "nonzero";
  }
  return "?";
}

std::uint64_t next_random(std::uint64_t &state) noexcept {
  // splitmix64
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rational random_rational(std::uint64_t &state, int max_numerator, int max_denominator) {
  for (;;) {
    const long span = 2L * max_numerator + 1;
    const long p = static_cast<long>(next_random(state) % static_cast<std::uint64_t>(span)) -
                   max_numerator;
    const long q = 1 + static_cast<long>(next_random(state) %
                                         static_cast<std::uint64_t>(max_denominator));
    if (p != 0)
      return make_rational(p, q);
  }
}

namespace {

bool proven_zero(const Expr &e, const ZeroTestOptions &opts) {
  if (e.is_zero())
    return true;
  if (opts.term_budget == 0)
    return false;
  try {
    return numerator(e, opts.term_budget).is_zero();
  } catch (const ExpansionBudgetError &) {
    return false;
  }
}

// Samples all roots at shared points; the first nonzero root decides.
ZeroVerdict sample(const std::vector<Expr> &roots, const std::vector<std::string> &labels,
                   const ZeroTestOptions &opts) {
  CompiledExprs tape(roots);
  const auto &vars = tape.variables();
  const bool exact = opts.exact == ExactMode::Always ||
                     (opts.exact == ExactMode::Auto && tape.exact_capable());
  if (exact && !tape.exact_capable())
    throw DomainError("exact sampling requested for a transcendental expression");

  std::uint64_t state = opts.seed;
  ZeroVerdict verdict;
  verdict.kind = ZeroKind::ProbablyZero;
  std::vector<Rational> point(vars.size());
  std::vector<double> fpoint(vars.size());
  const int attempts = std::max(1, opts.attempts_per_sample) * std::max(1, opts.samples);
  int tried = 0;
  while (verdict.samples < opts.samples) {
    if (tried++ >= attempts)
      throw DomainError("no admissible sample point found after " + std::to_string(attempts) +
                        " attempts");
    for (std::size_t i = 0; i < vars.size(); ++i) {
      std::optional<Rational> v;
      if (opts.sampler)
        v = opts.sampler(vars[i], state);
      if (!v)
        v = tried == 1 ? Rational(static_cast<long>(i) + 1) : random_rational(state);
      point[i] = *v;
      fpoint[i] = v->get_d();
    }
    std::optional<std::size_t> bad;
    if (exact) {
      auto vals = tape.eval_exact(point);
      if (!vals)
        continue;
      for (std::size_t r = 0; r < vals->size() && !bad; ++r)
        if (sgn((*vals)[r]) != 0) {
          bad = r;
          verdict.exact_value = (*vals)[r];
          verdict.value = (*vals)[r].get_d();
        }
    } else {
      auto vals = tape.eval_float(fpoint);
      if (!vals)
        continue;
      bool finite = true;
      for (const auto &fv : *vals)
        finite = finite && std::isfinite(fv.value) && std::isfinite(fv.magnitude);
      if (!finite)
        continue;
      for (std::size_t r = 0; r < vals->size() && !bad; ++r) {
        const auto &fv = (*vals)[r];
        const double scale = std::max(fv.magnitude, 1e-300);
        if (std::fabs(fv.value) > opts.tolerance * scale && std::fabs(fv.value) > 1e-300) {
          bad = r;
          verdict.value = fv.value;
        }
      }
    }
    if (bad) {
      verdict.kind = ZeroKind::Nonzero;
      for (std::size_t i = 0; i < vars.size(); ++i)
        verdict.witness[vars[i]] = point[i];
      if (*bad < labels.size())
        verdict.label = labels[*bad];
      return verdict;
    }
    ++verdict.samples;
  }
  return verdict;
}

} // namespace

ZeroVerdict is_zero(const Expr &e, const ZeroTestOptions &opts) {
  if (proven_zero(e, opts))
    return {};
  return sample({e}, {}, opts);
}

ZeroVerdict all_zero(const std::vector<Expr> &es, const std::vector<std::string> &labels,
                     const ZeroTestOptions &opts) {
  std::vector<Expr> open;
  std::vector<std::string> open_labels;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (proven_zero(es[i], opts))
      continue;
    open.push_back(es[i]);
    open_labels.push_back(i < labels.size() ? labels[i] : std::to_string(i));
  }
  if (open.empty())
    return {};
  return sample(open, open_labels, opts);
}

} // namespace maf
