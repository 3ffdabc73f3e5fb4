#include "unshuffle/exactalg.hpp"

#include <algorithm>
#include <map>

#include "unshuffle/errors.hpp"
#include "unshuffle/symfun.hpp"

namespace unshuffle {

QPoly normal_form(const QPoly& f, const std::vector<QPoly>& basis) {
  QPoly p = f;
  std::vector<Term<Rational>> rem;
  while (!p.is_zero()) {
    const Monomial& lm = p.leading_monomial();
    const QPoly* divisor = nullptr;
    for (const auto& g : basis) {
      if (!g.is_zero() && g.leading_monomial().divides(lm)) {
        divisor = &g;
        break;
      }
    }
    if (divisor) {
      Rational c = -p.leading_coeff() / divisor->leading_coeff();
      p = p.add_scaled(c, lm / divisor->leading_monomial(), *divisor);
    } else {
      rem.push_back(p.leading_term());
      p = p.tail();
    }
  }
  return QPoly::from_terms(f.arity(), std::move(rem), f.order());
}

QPoly s_polynomial(const QPoly& f, const QPoly& g) {
  const Monomial l = lcm(f.leading_monomial(), g.leading_monomial());
  QPoly zero(f.arity(), f.order());
  QPoly a = zero.add_scaled(Rational(1) / f.leading_coeff(), l / f.leading_monomial(), f);
  return a.add_scaled(Rational(-1) / g.leading_coeff(), l / g.leading_monomial(), g);
}

namespace {

struct CriticalPair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
};

class Buchberger {
 public:
  Buchberger(MonomialOrder order, const GroebnerLimits& limits) : order_(order), limits_(limits) {}

  void insert(QPoly h) {
    check_caps(h);
    const std::size_t hidx = polys_.size();
    const Monomial lh = h.leading_monomial();
    polys_.push_back(std::move(h));
    active_.push_back(true);

    std::vector<CriticalPair> fresh;
    for (std::size_t g = 0; g < hidx; ++g) {
      if (active_[g]) fresh.push_back({g, hidx, lcm(polys_[g].leading_monomial(), lh)});
    }
    // Chain criterion among the new pairs: drop (g,h) when another new pair
    // has an lcm dividing lcm(g,h), keeping one representative per lcm.
    std::vector<CriticalPair> kept;
    for (std::size_t k = 0; k < fresh.size(); ++k) {
      const auto& p = fresh[k];
      bool keep = polys_[p.i].leading_monomial().coprime(lh);
      if (!keep) {
        keep = true;
        for (std::size_t k2 = k + 1; k2 < fresh.size() && keep; ++k2) {
          if (fresh[k2].lcm.divides(p.lcm)) keep = false;
        }
        for (const auto& d : kept) {
          if (!keep) break;
          if (d.lcm.divides(p.lcm)) keep = false;
        }
      }
      if (keep) kept.push_back(p);
    }
    // Product criterion.
    std::erase_if(kept, [&](const CriticalPair& p) { return polys_[p.i].leading_monomial().coprime(lh); });
    // Chain criterion against existing pairs.
    std::erase_if(pairs_, [&](const CriticalPair& p) {
      return lh.divides(p.lcm) && lcm(polys_[p.i].leading_monomial(), lh) != p.lcm &&
             lcm(polys_[p.j].leading_monomial(), lh) != p.lcm;
    });
    pairs_.insert(pairs_.end(), kept.begin(), kept.end());
    for (std::size_t g = 0; g < hidx; ++g) {
      if (active_[g] && lh.divides(polys_[g].leading_monomial())) active_[g] = false;
    }
  }

  void run() {
    while (!pairs_.empty()) {
      auto it = std::min_element(pairs_.begin(), pairs_.end(), [&](const CriticalPair& a, const CriticalPair& b) {
        int c = compare(a.lcm, b.lcm, order_);
        if (c != 0) return c < 0;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
      });
      CriticalPair p = *it;
      pairs_.erase(it);
      QPoly h = normal_form(s_polynomial(polys_[p.i], polys_[p.j]), active_basis());
      if (!h.is_zero()) insert(h.monic());
    }
  }

  std::vector<QPoly> active_basis() const {
    std::vector<QPoly> out;
    for (std::size_t g = 0; g < polys_.size(); ++g) {
      if (active_[g]) out.push_back(polys_[g]);
    }
    return out;
  }

 private:
  void check_caps(const QPoly& h) const {
    if (h.total_degree() > limits_.max_degree) throw CapExceeded("total degree above " + std::to_string(limits_.max_degree));
    if (polys_.size() + 1 > limits_.max_basis) throw CapExceeded("basis size above " + std::to_string(limits_.max_basis));
    for (const auto& t : h.terms()) {
      if (bit_length(t.coeff) > limits_.max_coeff_bits) {
        throw CapExceeded("coefficient bit-length above " + std::to_string(limits_.max_coeff_bits));
      }
    }
  }

  MonomialOrder order_;
  GroebnerLimits limits_;
  std::vector<QPoly> polys_;
  std::vector<bool> active_;
  std::vector<CriticalPair> pairs_;
};

std::vector<QPoly> interreduce(std::vector<QPoly> g, MonomialOrder order) {
  std::sort(g.begin(), g.end(), [&](const QPoly& a, const QPoly& b) {
    return compare(a.leading_monomial(), b.leading_monomial(), order) < 0;
  });
  // Minimal basis: g is ascending, so any divisor of g[k]'s leading monomial sits before it.
  std::vector<QPoly> minimal;
  for (auto& p : g) {
    const bool redundant = std::any_of(minimal.begin(), minimal.end(), [&](const QPoly& q) {
      return q.leading_monomial().divides(p.leading_monomial());
    });
    if (!redundant) minimal.push_back(std::move(p));
  }
  g = std::move(minimal);
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::vector<QPoly> others;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j != k) others.push_back(g[j]);
    }
    QPoly lead = QPoly::monomial(g[k].leading_monomial(), g[k].leading_coeff(), order);
    g[k] = (lead + normal_form(g[k].tail(), others)).monic();
  }
  return g;
}

void enumerate_box(std::size_t var, std::vector<Exponent>& cur, const std::vector<Exponent>& bound,
                   const std::vector<QPoly>& basis, std::vector<Monomial>& out) {
  if (var == cur.size()) {
    Monomial m(cur);
    for (const auto& g : basis) {
      if (g.leading_monomial().divides(m)) return;
    }
    out.push_back(std::move(m));
    return;
  }
  for (Exponent e = 0; e < bound[var]; ++e) {
    cur[var] = e;
    enumerate_box(var + 1, cur, bound, basis, out);
  }
  cur[var] = 0;
}

}  // namespace

GroebnerResult groebner(const IdealBasis& ideal, const GroebnerLimits& limits) {
  GroebnerResult res;
  res.order = ideal.order;
  if (ideal.generators.empty()) throw UsageError("ideal needs at least one generator");
  const std::size_t arity = ideal.generators.front().arity();

  Buchberger bb(ideal.order, limits);
  bool any = false;
  for (const auto& f : ideal.generators) {
    if (f.arity() != arity) throw UsageError("generators differ in arity");
    if (f.is_zero()) continue;
    any = true;
    bb.insert(f.with_order(ideal.order).monic());
  }
  if (!any) {
    res.quotient_dim = std::nullopt;
    return res;
  }
  bb.run();
  res.basis = interreduce(bb.active_basis(), ideal.order);

  if (res.basis.size() == 1 && res.basis.front().is_constant()) {
    res.quotient_dim = 0;
    return res;
  }
  std::vector<Exponent> bound(arity, 0);
  for (const auto& g : res.basis) {
    const Monomial& lm = g.leading_monomial();
    std::size_t nonzero = 0, var = 0;
    for (std::size_t i = 0; i < arity; ++i) {
      if (lm[i]) {
        ++nonzero;
        var = i;
      }
    }
    if (nonzero == 1 && (bound[var] == 0 || lm[var] < bound[var])) bound[var] = lm[var];
  }
  if (std::any_of(bound.begin(), bound.end(), [](Exponent b) { return b == 0; })) return res;

  std::vector<Exponent> cur(arity, 0);
  enumerate_box(0, cur, bound, res.basis, res.standard_monomials);
  std::sort(res.standard_monomials.begin(), res.standard_monomials.end(),
            [&](const Monomial& a, const Monomial& b) { return compare(a, b, ideal.order) < 0; });
  res.quotient_dim = res.standard_monomials.size();
  return res;
}

std::vector<QPoly> power_sum_system(const Instance& inst, std::size_t count, MonomialOrder order) {
  std::vector<QPoly> out;
  for (std::size_t l = 1; l <= count; ++l) {
    QPoly q = expand_power_sum_pullback(inst.a, static_cast<int>(l), order);
    Rational target = power_sum<Rational>(static_cast<int>(l), inst.y);
    out.push_back(q - QPoly::constant(inst.n, target, order));
  }
  return out;
}

QMatrix multiplication_matrix(const GroebnerResult& gb, std::size_t var) {
  if (!gb.zero_dimensional()) throw UsageError("multiplication matrix needs a zero-dimensional ideal");
  const auto& std_monos = gb.standard_monomials;
  std::map<Monomial, std::size_t> index;
  for (std::size_t k = 0; k < std_monos.size(); ++k) index[std_monos[k]] = k;
  QMatrix m(std_monos.size(), std_monos.size());
  if (std_monos.empty()) return m;
  const std::size_t arity = std_monos.front().arity();
  for (std::size_t k = 0; k < std_monos.size(); ++k) {
    QPoly shifted = QPoly::monomial(std_monos[k] * Monomial::variable(arity, var), Rational(1), gb.order);
    const QPoly nf = normal_form(shifted, gb.basis);
    for (const auto& t : nf.terms()) m(index.at(t.mono), k) = t.coeff;
  }
  return m;
}

UPoly characteristic_polynomial(const QMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  QMatrix mk(n, n);
  const QMatrix id = QMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = a * mk + c[n - k + 1] * id;
    QMatrix amk = a * mk;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += amk(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return UPoly(std::move(c));
}

namespace {

void require_exact_noiseless(const Instance& inst, bool allow_large) {
  if (inst.domain != Domain::exact) throw UsageError("exact verification needs an exact-domain instance");
  if (inst.sigma != 0.0) throw UsageError("exact verification needs a noiseless instance");
  if (!validate(inst).empty()) throw UsageError("invalid instance: " + validate(inst).front());
  if (inst.n > 3 && !allow_large) throw CapExceeded("n > 3 for exact verification");
}

}  // namespace

std::optional<std::size_t> verify_square_count(const Instance& inst, bool allow_large, const GroebnerLimits& limits) {
  require_exact_noiseless(inst, allow_large);
  GroebnerResult gb = groebner({power_sum_system(inst, inst.n), MonomialOrder::grevlex}, limits);
  return gb.quotient_dim;
}

UniqueRootResult verify_unique_root(const Instance& inst, bool allow_large, const GroebnerLimits& limits) {
  require_exact_noiseless(inst, allow_large);
  const std::size_t n = inst.n;
  std::vector<QPoly> gens = power_sum_system(inst, n + 1, MonomialOrder::grevlex);
  GroebnerResult gb = groebner({gens, MonomialOrder::grevlex}, limits);

  UniqueRootResult res;
  if (gb.is_unit_ideal()) {
    res.status = UniqueRootResult::Status::no_solution;
    res.basis = gb.basis;
    return res;
  }
  if (!gb.zero_dimensional()) throw TheoremViolation("solution set is positive-dimensional");
  res.quotient_dim = *gb.quotient_dim;

  const bool linear = gb.basis.size() == n && std::all_of(gb.basis.begin(), gb.basis.end(), [](const QPoly& g) {
                        return g.total_degree() == 1 && g.size() <= 2;
                      });
  res.root.assign(n, Rational(0));
  if (linear) {
    // Reduced basis {x_i - c_i}: identical in every monomial order, so it is
    // also the reduced lex basis.
    for (const auto& g : gb.basis) {
      std::size_t var = 0;
      while (g.leading_monomial()[var] == 0) ++var;
      res.root[var] = -g.coefficient(Monomial(n));
    }
    res.basis = gb.basis;
  } else {
    GroebnerResult lex = groebner({gens, MonomialOrder::lex}, limits);
    for (std::size_t i = 0; i < n; ++i) {
      UPoly sf = squarefree_part(characteristic_polynomial(multiplication_matrix(lex, i)));
      if (sf.degree() != 1) throw TheoremViolation("more than one solution");
      res.root[i] = -sf.coeff(0);
    }
    for (const auto& g : gens) {
      if (sgn(g.eval(res.root)) != 0) throw TheoremViolation("candidate point is not a solution");
    }
    res.multiplicity_note = "quotient dimension " + std::to_string(res.quotient_dim) +
                            " > 1: single point with multiplicity > 1 (ideal not radical)";
    res.basis = lex.basis;
  }
  if (inst.xi_star && res.root != *inst.xi_star) throw TheoremViolation("unique root differs from xi_star");
  res.status = UniqueRootResult::Status::unique_root;
  return res;
}

std::vector<QPoly> determinantal_linear_basis(const QMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (n == 0 || m < n) throw UsageError("determinantal basis needs m ≥ n ≥ 1");
  std::vector<std::size_t> pivot_rows(n), all_cols(n);
  for (std::size_t k = 0; k < n; ++k) {
    pivot_rows[k] = m - n + k;
    all_cols[k] = k;
  }
  const Rational pivot_det = determinant(a.select(pivot_rows, all_cols));
  if (sgn(pivot_det) == 0) throw DegenerateInput("pivot block singular");

  std::vector<QPoly> forms;
  for (std::size_t i = 0; i + n < m; ++i) {
    std::vector<Term<Rational>> terms;
    terms.push_back({Monomial::variable(m, i), Rational(1)});
    for (std::size_t k = 0; k < n; ++k) {
      // Rows i, then the pivot block without its k-th row (Cramer's rule
      // for the coefficients of row i in the pivot rows).
      std::vector<std::size_t> rows{i};
      for (std::size_t r = 0; r < n; ++r) {
        if (r != k) rows.push_back(pivot_rows[r]);
      }
      Rational minor = determinant(a.select(rows, all_cols));
      Rational coeff = minor / pivot_det;
      if (k % 2 == 0) coeff = -coeff;
      terms.push_back({Monomial::variable(m, pivot_rows[k]), coeff});
    }
    forms.push_back(QPoly::from_terms(m, std::move(terms), MonomialOrder::lex));
  }
  return forms;
}

}  // namespace unshuffle
