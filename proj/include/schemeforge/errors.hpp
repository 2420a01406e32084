#pragma once

#include <stdexcept>
#include <string>

namespace schemeforge {

// Base class for everything thrown by this library.
struct SchemeError : std::runtime_error {
  explicit SchemeError(const std::string& msg) : std::runtime_error(msg) {}
};

// A relation matrix failed one of the association-scheme axioms.  The
// offending cell(s) are kept so callers can print a witness.
struct AxiomViolation : SchemeError {
  enum class Kind {
    BadShape,        // matrix not square / empty
    BadValue,        // entry out of range or relation index unused
    Identity,        // relation 0 is not exactly the diagonal
    Involution,      // transpose of a relation is not a relation
    Regularity,      // intersection number depends on the pair chosen
  };

  Kind kind;
  int x = -1, y = -1;  // witness cell
  int u = -1, v = -1, w = -1;  // witness relation triple (regularity)
  int expected = -1, got = -1;

  AxiomViolation(Kind k, const std::string& msg) : SchemeError(msg), kind(k) {}
};

struct NotClosed : SchemeError {
  int u = -1, v = -1, w = -1;  // w in uv but outside the subset
  NotClosed(const std::string& msg, int u_, int v_, int w_)
      : SchemeError(msg), u(u_), v(v_), w(w_) {}
};

struct NotOddPrime : SchemeError {
  int p;
  explicit NotOddPrime(int p_)
      : SchemeError("p must be an odd prime, got " + std::to_string(p_)), p(p_) {}
};

// Input is legal but larger than the desk-scale guard allows without an
// explicit opt-in.
struct ResourceGuard : SchemeError {
  using SchemeError::SchemeError;
};

// A structural precondition of an analysis (e.g. the thin residue being
// elementary abelian of square order) does not hold for the given scheme.
struct HypothesisViolation : SchemeError {
  using SchemeError::SchemeError;
};

// Two relations in the same double coset produced different left
// stabilizers, so a per-class stabilizer is not well defined.
struct IllDefinedStabilizer : SchemeError {
  using SchemeError::SchemeError;
};

// A base block of a difference family is fixed by a non-identity element.
struct StabilizerNotTrivial : SchemeError {
  int block = -1;
  int element = -1;
  StabilizerNotTrivial(const std::string& msg, int blk, int elt)
      : SchemeError(msg), block(blk), element(elt) {}
};

struct NotThin : SchemeError {
  using SchemeError::SchemeError;
};

struct NotAbelian : SchemeError {
  using SchemeError::SchemeError;
};

// The randomized spectrum routine failed validation on every retry.
struct DecompositionUnstable : SchemeError {
  using SchemeError::SchemeError;
};

// A cross-check between two formulas that must agree came out unequal.
struct EquivalenceFailed : SchemeError {
  using SchemeError::SchemeError;
};

// Malformed file contents (parse errors, inconsistent header, bad labels).
struct DataError : SchemeError {
  using SchemeError::SchemeError;
};

}  // namespace schemeforge
