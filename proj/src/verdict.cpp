#include "wfr/verdict.hpp"

namespace wfr {

void SearchBudget::validate() const
{
    if (max_size <= 0 || witness_size <= 0 || max_candidates == 0 || max_coloring_nodes == 0 || max_colors <= 0
        || threads == 0)
        throw InputError("search budget caps must be strictly positive");
    if (extension_depth < 0)
        throw InputError("extension depth must be non-negative");
    if (wall_clock && wall_clock->count() <= 0)
        throw InputError("wall-clock cap must be strictly positive");
}

json SearchBudget::to_json() const
{
    json j = {{"max_size", max_size},
              {"witness_size", witness_size},
              {"max_candidates", max_candidates},
              {"max_coloring_nodes", max_coloring_nodes},
              {"max_colors", max_colors},
              {"extension_depth", extension_depth}};
    if (wall_clock)
        j["wall_clock_ms"] = wall_clock->count();
    return j;
}

SearchBudget SearchBudget::from_json(const json& j)
{
    SearchBudget b;
    b.max_size = j.value("max_size", b.max_size);
    b.witness_size = j.value("witness_size", b.witness_size);
    b.max_candidates = j.value("max_candidates", b.max_candidates);
    b.max_coloring_nodes = j.value("max_coloring_nodes", b.max_coloring_nodes);
    b.max_colors = j.value("max_colors", b.max_colors);
    b.extension_depth = j.value("extension_depth", b.extension_depth);
    if (j.contains("wall_clock_ms"))
        b.wall_clock = std::chrono::milliseconds(j.at("wall_clock_ms").get<long long>());
    b.validate();
    return b;
}

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Unknown: return "unknown";
    }
    return "unknown";
}

json Verdict::to_json() const
{
    const char* key = outcome == Outcome::Yes ? "witness" : outcome == Outcome::No ? "certificate" : "budget_report";
    return {{"verdict", to_string(outcome)}, {key, payload}};
}

Deadline::Deadline(const SearchBudget& b)
{
    if (b.wall_clock)
        until_ = std::chrono::steady_clock::now() + *b.wall_clock;
}

bool Deadline::expired() const { return until_ && std::chrono::steady_clock::now() > *until_; }

} // namespace wfr
