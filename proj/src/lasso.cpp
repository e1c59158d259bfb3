#include "ltlmon/lasso.hpp"

#include <stdexcept>

namespace ltlmon {

namespace {

using Truth = std::vector<char>;

void check_word(const LassoWord& w) {
  if (w.cycle.empty()) throw std::invalid_argument("lasso word has an empty cycle");
}

Letter atom_bit(const Formula& f, const ApSet& ap) {
  auto idx = ap.index_of(f.name());
  if (!idx) throw std::invalid_argument("atom '" + f.name() + "' is not in the AP set");
  return Letter{1} << *idx;
}

// Positions 0..n-1 of the lasso; the successor of the last position loops back to the
// first cycle position. Temporal operators are least (U, F) or greatest (R, G) fixpoints
// over this successor graph.
class FixpointEvaluator {
 public:
  FixpointEvaluator(const LassoWord& w, const ApSet& ap) : w_(w), ap_(ap), n_(w.length()) {}

  Truth eval(const Formula& f) const {
    using K = FormulaKind;
    Truth out(n_, 0);
    switch (f.kind()) {
      case K::Atom: {
        Letter bit = atom_bit(f, ap_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = (w_.at(i) & bit) != 0;
        return out;
      }
      case K::True: return Truth(n_, 1);
      case K::False: return out;
      case K::Not: {
        Truth a = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = !a[i];
        return out;
      }
      case K::And:
      case K::Or: {
        Truth a = eval(f.lhs()), b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i)
          out[i] = f.kind() == K::And ? (a[i] && b[i]) : (a[i] || b[i]);
        return out;
      }
      case K::Next: {
        Truth a = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = a[succ(i)];
        return out;
      }
      case K::Until: return fixpoint(eval(f.lhs()), eval(f.rhs()), false);
      case K::Release: return fixpoint(eval(f.lhs()), eval(f.rhs()), true);
      case K::Eventually: return fixpoint(Truth(n_, 1), eval(f.lhs()), false);
      case K::Always: return fixpoint(Truth(n_, 0), eval(f.lhs()), true);
    }
    return out;
  }

 private:
  std::size_t succ(std::size_t i) const { return i + 1 < n_ ? i + 1 : w_.prefix.size(); }

  // until:   x = b | (a & X x), least fixpoint
  // release: x = b & (a | X x), greatest fixpoint
  Truth fixpoint(const Truth& a, const Truth& b, bool greatest) const {
    Truth x(n_, greatest ? 1 : 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        char v = greatest ? (b[k] && (a[k] || x[succ(k)])) : (b[k] || (a[k] && x[succ(k)]));
        if (v != x[k]) {
          x[k] = v;
          changed = true;
        }
      }
    }
    return x;
  }

  const LassoWord& w_;
  const ApSet& ap_;
  std::size_t n_;
};

// Literal reading of the satisfaction relation. Suffixes at positions >= |prefix| repeat
// with period |cycle|, so any witness position for U (or counterexample for R) starting
// at i exists within max(i, |prefix|) + |cycle| positions.
class ReferenceEvaluator {
 public:
  ReferenceEvaluator(const LassoWord& w, const ApSet& ap) : w_(w), ap_(ap), n_(w.length()) {}

  Truth eval(const Formula& f) const {
    using K = FormulaKind;
    Truth out(n_, 0);
    switch (f.kind()) {
      case K::Atom: {
        Letter bit = atom_bit(f, ap_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = (w_.at(i) & bit) != 0;
        return out;
      }
      case K::True: return Truth(n_, 1);
      case K::False: return out;
      case K::Not: {
        Truth a = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = !a[i];
        return out;
      }
      case K::And: {
        Truth a = eval(f.lhs()), b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = a[i] && b[i];
        return out;
      }
      case K::Or: {
        Truth a = eval(f.lhs()), b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = a[i] || b[i];
        return out;
      }
      case K::Next: {
        Truth a = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = a[canonical(i + 1)];
        return out;
      }
      case K::Until: {
        Truth a = eval(f.lhs()), b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = until_at(a, b, i);
        return out;
      }
      case K::Eventually: {
        Truth b = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = until_at(Truth(n_, 1), b, i);
        return out;
      }
      case K::Release: {
        Truth a = eval(f.lhs()), b = eval(f.rhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = release_at(a, b, i);
        return out;
      }
      case K::Always: {
        Truth b = eval(f.lhs());
        for (std::size_t i = 0; i < n_; ++i) out[i] = release_at(Truth(n_, 0), b, i);
        return out;
      }
    }
    return out;
  }

 private:
  std::size_t canonical(std::size_t i) const {
    const std::size_t u = w_.prefix.size();
    return i < u ? i : u + (i - u) % w_.cycle.size();
  }
  std::size_t horizon(std::size_t i) const {
    return std::max(i, w_.prefix.size()) + w_.cycle.size();
  }

  // exists k >= i: b(k) and forall i <= j < k: a(j)
  bool until_at(const Truth& a, const Truth& b, std::size_t i) const {
    for (std::size_t k = i; k < horizon(i); ++k) {
      if (b[canonical(k)]) return true;
      if (!a[canonical(k)]) return false;
    }
    return false;
  }

  // forall k >= i: b(k) or exists i <= j < k: a(j)
  bool release_at(const Truth& a, const Truth& b, std::size_t i) const {
    for (std::size_t k = i; k < horizon(i); ++k) {
      if (!b[canonical(k)]) return false;
      if (a[canonical(k)]) return true;
    }
    return true;
  }

  const LassoWord& w_;
  const ApSet& ap_;
  std::size_t n_;
};

}  // namespace

bool lasso_models(const LassoWord& w, const Formula& f, const ApSet& ap) {
  check_word(w);
  return FixpointEvaluator(w, ap).eval(f)[0] != 0;
}

bool lasso_models_reference(const LassoWord& w, const Formula& f, const ApSet& ap) {
  check_word(w);
  return ReferenceEvaluator(w, ap).eval(f)[0] != 0;
}

}  // namespace ltlmon
