#pragma once

#include <span>
#include <string>
#include <vector>

#include "tw/word.hpp"

namespace tw {

/// Target pattern of the occurrence count: the canonical word M over a
/// regular uncountable cardinal, a bit-pattern repetition word over an
/// uncountable cardinal, or (for desk-scale cross-checks) a finite word.
struct PatternFamily {
  enum class Kind { canonical, bits, finite };
  Kind kind = Kind::canonical;
  std::optional<Atom> kappa;   // canonical
  GDescription desc;           // bits
  std::optional<Atom> lambda;  // bits
  bool chunked = true;
  FiniteWord pattern;  // finite

  static PatternFamily canonical(Atom kappa);                 // not_regular_uncountable
  static PatternFamily bits(GDescription d, Atom lambda, bool chunked = true);  // not_uncountable
  static PatternFamily finite(FiniteWord pattern);
  Term word(const Session& s) const;  // the family word as a term
  friend bool operator==(const PatternFamily& a, const PatternFamily& b);
};

/// beta |-> g_beta over [0, kappa).
Term build_M_kappa(const Session& s, const Ord& kappa);
Term build_M_kappa(const Session& s, const Atom& kappa);

/// Disjoint-chunk omega_1 repetition of the block beta |-> h_{beta+2g(beta)}.
Term build_M_g(const Session& s, GDescription desc, const Atom& lambda);

/// Maximal convex region of a reduced word matching an end segment of the
/// family word (sign +) or of its inverse (sign -). matched_tail is the
/// domain position the matching end segment starts at.
struct Occurrence {
  int sign = +1;
  Cut from, to;  // [from, to)
  Ord matched_tail;
};

std::vector<Occurrence> occurrences(const Word& x, const PatternFamily& fam, const Session& s);

struct OccReport {
  Nat plus = 0, minus = 0;
  std::vector<Occurrence> reps;  // one per equivalence class
};

OccReport class_count(const Word& x, const PatternFamily& fam, const Session& s);

long long phi_eval(const Term& x, const PatternFamily& fam, const Session& s);
long long phi_eval(const Word& x, const PatternFamily& fam, const Session& s);

/// True iff no end segment of a's word is isomorphic to an end segment of
/// b's word (the separation condition making family homomorphisms distinct).
bool star_check(const PatternFamily& a, const PatternFamily& b);

/// Finite index set of pairwise separated families.
struct SpeckerHom {
  std::vector<PatternFamily> families;
  static SpeckerHom make(std::vector<PatternFamily> families);  // checks pairwise star
};

long long hom_eval(const SpeckerHom& h, const Term& x, const Session& s);

/// Entry (row, col) = phi_row(M_col) over the deduplicated family words of
/// all index sets, in order of first appearance.
std::vector<PatternFamily> hom_matrix_columns(std::span<const SpeckerHom> homs);
std::vector<std::vector<long long>> hom_matrix(std::span<const SpeckerHom> homs, const Session& s);

struct WitnessReport {
  Ord beta;
  FiniteWord restriction;
  long long phi = 0;
  bool ok() const { return restriction.empty() && phi == 1; }
};

/// For finite F: the tail of M_kappa past F restricts to the empty word yet
/// has phi = 1, so no map factoring through the F-projection can agree.
WitnessReport specker_witness(std::span<const Ord> F, const Atom& kappa, const Session& s);

// Serialization: line-oriented key=value, and JSON for the structured format.
std::string occ_report_lines(const OccReport& r);
std::string occ_report_json(const OccReport& r);
std::string witness_lines(const WitnessReport& r, const Session& s);
std::string witness_json(const WitnessReport& r, const Session& s);

}  // namespace tw
