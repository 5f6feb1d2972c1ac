#pragma once

#include <optional>
#include <vector>

#include "wfr/category.hpp"
#include "wfr/hypergraph.hpp"

namespace wfr {

// ---------------------------------------------------------------------------
// Amalgamability

bool check_cocone(const Category& c, const Arrow& f, const Arrow& g, const Cocone& w);

/// Searches for a cocone of the span (f, g): backend proposal first, then
/// every apex of grade <= budget.witness_size. `work` counts apex candidates.
std::optional<Cocone> find_cocone(const Category& c, const Arrow& f, const Arrow& g, const SearchBudget& budget,
                                  std::uint64_t& work);

/// Arrows out of x considered as span legs: hom into every object of grade
/// <= budget.max_size plus the backend's one-step extensions, deduplicated,
/// in canonical order.
std::vector<Arrow> legs_out_of(const Category& c, ObjectId x, const SearchBudget& budget);

Verdict is_amalgamable_arrow(const Category& c, const Arrow& alpha, const SearchBudget& budget);
Verdict is_amalgamable_object(const Category& c, ObjectId z, const SearchBudget& budget);

/// Re-checks the cocones recorded in a Yes payload of is_amalgamable_arrow.
bool check_amalgamation_witness(const Category& c, const Arrow& alpha, const json& witness);

Verdict is_directed(const Category& c, const SearchBudget& budget);

// ---------------------------------------------------------------------------
// Ramsey arrows

/// C(alpha, v): arrows h o alpha for h out of cod(alpha) into v, deduplicated
/// and sorted.
std::vector<Arrow> arrows_through(const Category& c, const Arrow& alpha, ObjectId v);

struct BadColoringQuery {
    Arrow alpha;
    ObjectId b = 0;
    std::vector<Arrow> family;  // F, a subset of C(alpha, b)
    int colors = 2;
};

struct BadColoringResult {
    ColoringStatus status = ColoringStatus::None;  // Found = a bad colouring exists
    std::vector<Arrow> vertices;                    // C(alpha, v)
    std::vector<int> coloring;
    std::uint64_t nodes = 0;
};

/// Builds the constraint hypergraph {e o F : e in C(b, v)} on C(alpha, v).
Hypergraph ramsey_hypergraph(const Category& c, const BadColoringQuery& q, ObjectId v,
                             std::vector<Arrow>* vertices = nullptr);

/// A colouring of C(alpha, v) with no e in C(b, v) making it constant on
/// e o F, or status None when v works for (b, F, k).
BadColoringResult find_bad_coloring(const Category& c, const BadColoringQuery& q, ObjectId v,
                                    const SearchBudget& budget);

bool check_bad_coloring(const Category& c, const BadColoringQuery& q, ObjectId v, const std::vector<int>& coloring);

struct RamseyWitness {
    std::optional<ObjectId> v;
    std::vector<std::pair<ObjectId, BadColoringResult>> rejected;  // candidates before v, in order
    bool exhausted_budget = false;
};

/// Least v (canonical order, grade <= budget.witness_size) passing
/// find_bad_coloring = none.
RamseyWitness ramsey_witness_search(const Category& c, const BadColoringQuery& q, const SearchBudget& budget);

Verdict is_ramsey_arrow(const Category& c, const Arrow& alpha, const SearchBudget& budget);

// ---------------------------------------------------------------------------
// Amalgamation extensions

Verdict verify_amalgamation_extension(const Category& sub, const Category& full, const SearchBudget& budget);

} // namespace wfr
