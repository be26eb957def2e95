#pragma once

#include <vector>

#include "cla/vahlen.hpp"

namespace cla {

// Element of a finitely generated arithmetic subgroup together with the word
// in the generators that produced it. Entries of word are 1-based generator
// indices, negated for the inverse generator. The stored matrix equals the
// ordered product of the named generators.
struct GroupWord {
    VahlenMatrix matrix;
    std::vector<int> word;
};

// Generators of the special hypercomplex modular group of rank parameter p
// inside SAV(n): translations by 1, e_1, ..., e_p and the inversion J.
// Requires 0 <= p < n. For n = 1, p = 0 these generate SL(2, Z).
std::vector<VahlenMatrix> gamma_p_generators(int n, int p);

// Membership test for the principal congruence subgroup of level N: all of
// a - 1, b, c, d - 1 must lie in N * O_p where O_p is the integer span of
// the blades with indices in {1, ..., p}. Entries must have integer
// coefficients within 1e-9 or std::invalid_argument is thrown.
bool in_congruence_subgroup(const VahlenMatrix& m, int N, int p);

struct EnumOptions {
    int max_word_length = 6;
    // Cutoff on |c|^2 + |d|^2; elements beyond it are not reported.
    double norm_bound = 25.0;
    // Expansion keeps nodes up to norm_bound * expand_slack so that short
    // detours through larger matrices are not lost.
    double expand_slack = 4.0;
    // Identify m with -m. Sensible for the full group where -1 is reachable;
    // must be off when enumerating level-N >= 2 coset data.
    bool pm_quotient = true;
};

// Breadth-first enumeration of the subgroup generated by the given matrices,
// deduplicated by coefficients rounded at 1e-6. Output order is
// deterministic: discovery order of the BFS with generators tried in index
// order, g before g^{-1}.
std::vector<GroupWord> enumerate_group(const std::vector<VahlenMatrix>& generators,
                                       const EnumOptions& options);

// Representatives of the right cosets (translation subgroup) \ (group
// enumerated from the generators), obtained by deduplicating on the bottom
// row (c, d): left translation leaves (c, d) fixed, and within the groups
// used here equal bottom rows imply equal cosets.
std::vector<GroupWord> enumerate_coset_reps(const std::vector<VahlenMatrix>& generators,
                                            const EnumOptions& options);

// Filters full-group words down to the level-N congruence subgroup.
std::vector<GroupWord> filter_congruence(const std::vector<GroupWord>& words, int N,
                                         int p);

}  // namespace cla
