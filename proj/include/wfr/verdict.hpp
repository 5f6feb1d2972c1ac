#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace wfr {

using json = nlohmann::json;

/// Raised for malformed inputs: bad JSON shapes, invalid structures, arrows
/// that are not arrows of the category they are used in.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a search runs past the caps of its SearchBudget and the
/// operation has no Unknown outcome to report instead.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SearchBudget {
    int max_size = 4;                        // grade bound on enumerated objects
    int witness_size = 8;                    // grade bound on enumerated witness objects
    std::uint64_t max_candidates = 2'000'000;
    std::uint64_t max_coloring_nodes = 200'000'000;
    int max_colors = 2;
    int extension_depth = 0;                 // rounds of backend one-step extensions used as extra span targets
    std::optional<std::chrono::milliseconds> wall_clock;
    bool record_witnesses = true;
    unsigned threads = 1;

    void validate() const;
    json to_json() const;
    static SearchBudget from_json(const json& j);
};

enum class Outcome { Yes, No, Unknown };

std::string to_string(Outcome o);

struct Verdict {
    Outcome outcome = Outcome::Unknown;
    json payload = json::object();

    static Verdict yes(json witness = json::object()) { return {Outcome::Yes, std::move(witness)}; }
    static Verdict no(json certificate) { return {Outcome::No, std::move(certificate)}; }
    static Verdict unknown(json report) { return {Outcome::Unknown, std::move(report)}; }

    bool is_yes() const { return outcome == Outcome::Yes; }
    bool is_no() const { return outcome == Outcome::No; }
    bool is_unknown() const { return outcome == Outcome::Unknown; }

    json to_json() const;
};

/// Deadline helper for the optional wall-clock cap.
class Deadline {
public:
    explicit Deadline(const SearchBudget& b);
    bool expired() const;

private:
    std::optional<std::chrono::steady_clock::time_point> until_;
};

} // namespace wfr
