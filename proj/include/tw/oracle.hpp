#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tw/word.hpp"

namespace tw {

/// Classic stack-free reduction of a finite letter sequence, written as a
/// repeated fixpoint scan so it stays independent of the symbolic engine.
FiniteWord finite_reduce_oracle(std::span<const Letter> letters);

/// Desk-scale stand-in: a finite reduced word scanned against a finite
/// pattern standing for a family word.
struct Miniature {
  FiniteWord word;
  FiniteWord pattern;
  std::string mapping_note;
};

struct BruteOcc {
  std::size_t lo = 0, hi = 0;  // [lo, hi)
  int sign = +1;
  std::size_t tail_index = 0;  // suffix start inside the pattern
};

/// Every contiguous interval equal to a nonempty suffix of the pattern (+)
/// or of its inverse (-).
std::vector<BruteOcc> occ_bruteforce(const Miniature& m);

/// Class counts per sign under the common-end-segment relation, computed
/// pairwise with union-find merging.
std::pair<Nat, Nat> classes_bruteforce(std::span<const BruteOcc> occs, const FiniteWord& word);

/// Any two same-sign occurrences are disjoint or share an end segment.
bool disjoint_or_equivalent(std::span<const BruteOcc> occs);

/// Pattern with a repeated letter whose occurrences overlap without sharing
/// an end segment; shows why the family words use pairwise distinct letters.
Miniature repeated_letter_counterexample(const Session& s);

struct TrialResult {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  bool agree = false;
};

struct TrialConfig {
  std::size_t trials = 1000;
  std::uint64_t seed0 = 12345;
  std::size_t max_word = 12;
  std::size_t max_pattern = 4;
  bool parallel = true;
};

/// The deterministic miniature instance of trial `seed`; session_out
/// receives the group assignment the instance lives in.
Miniature trial_miniature(std::uint64_t seed, const TrialConfig& cfg, Session& session_out);

/// One random miniature: brute-force class counts against the symbolic
/// scanner on the same instance. Deterministic per seed.
TrialResult run_one_trial(std::uint64_t seed, const TrialConfig& cfg);

/// Batch runner; trials are independent and run in parallel when enabled,
/// results are ordered by seed either way.
std::vector<TrialResult> run_agreement_trials(const TrialConfig& cfg);

std::string trial_report(std::span<const TrialResult> results);

/// Finite analogue of a chunked repetition word: `copies` chunks of a
/// `block`-long bit block over a chunk-coordinate space of block+2.
FiniteWord chunk_word(const Session& s, const GDescription& d, Nat block, Nat copies);

/// Exhaustive separation check on finite chunk words: no interval of one
/// equals a nonempty suffix of the other.
bool star_bruteforce(const Session& s, const GDescription& a, const GDescription& b, Nat block,
                     Nat copies);

}  // namespace tw
