#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfr/category.hpp"
#include "wfr/rng.hpp"

namespace wfr {

/// A finite monoid on {0, ..., n-1} given by its multiplication table.
class FiniteMonoid {
public:
    FiniteMonoid(int order, int unit, std::vector<std::vector<int>> table);

    int order() const { return n_; }
    int unit() const { return unit_; }
    int mul(int x, int y) const { return table_[x][y]; }
    const std::vector<std::vector<int>>& table() const { return table_; }

    /// M alpha = {x alpha : x in M}, sorted.
    std::vector<int> left_orbit(int alpha) const;

    json to_json() const;
    static FiniteMonoid from_json(const json& j);

    friend bool operator==(const FiniteMonoid&, const FiniteMonoid&) = default;

private:
    int n_;
    int unit_;
    std::vector<std::vector<int>> table_;
};

std::vector<int> left_zeros(const FiniteMonoid& m);
std::vector<int> right_zeros(const FiniteMonoid& m);

struct LeftEqualizer {
    bool holds = false;
    /// When it fails: a pair x, y in M alpha that no e equalizes.
    std::optional<std::pair<int, int>> failing_pair;
};

LeftEqualizer satisfies_LE(const FiniteMonoid& m, int alpha);
bool has_ramsey_property(const FiniteMonoid& m);

/// The right action of F = {f : M alpha f within M alpha} on M alpha.
struct RightActionGraph {
    std::vector<int> acting;      // F
    std::vector<int> vertices;    // M alpha
    int components = 0;           // undirected components
};

RightActionGraph right_action_graph(const FiniteMonoid& m, int alpha);

/// Ramsey status of alpha decided by the colouring search on the
/// one-object category; the payload records the right-action graph.
Verdict is_ramsey_element(const FiniteMonoid& m, int alpha);
Verdict has_weak_ramsey_property(const FiniteMonoid& m);

/// Pairs (x, y) with x = x y, i.e. x >= y.
std::vector<std::pair<int, int>> absorption_relation(const FiniteMonoid& m);

struct MonoidFlags {
    bool idempotent = false;
    bool commutative = false;
    bool semilattice = false;
    bool left_zero = false;   // every non-unit element is a left zero
    bool right_zero = false;  // every non-unit element is a right zero
    bool left_cancellative = false;

    json to_json() const;
};

MonoidFlags classify_monoid(const FiniteMonoid& m);

/// Canonical table string: minimum over unit-fixing relabelings, with the
/// unit relabeled to 0.
std::string canonical_form(const FiniteMonoid& m);
FiniteMonoid canonical_representative(const FiniteMonoid& m);

/// All monoids of order n up to isomorphism (n <= 4), sorted by canonical form.
std::vector<FiniteMonoid> enumerate_monoids(int n);

/// A random associative unital table of order n: rejection sampling with the
/// unit at 0, then a random relabeling.
FiniteMonoid random_monoid(int n, Rng& rng, std::uint64_t max_tries = 100'000'000);

/// Free monoid on named generators, optionally with a right zero "0"
/// adjoined: any product discards everything left of its last 0.
class WordMonoid {
public:
    using Word = std::vector<int>;  // generator indices; kZero for the right zero
    static constexpr int kZero = -1;

    WordMonoid(std::vector<std::string> generators, bool right_zero);

    const std::vector<std::string>& generators() const { return gens_; }
    bool has_right_zero() const { return right_zero_; }

    Word normalize(Word w) const;
    Word mul(const Word& x, const Word& y) const;
    Word parse(const std::string& text) const;  // space-separated symbols; "0" for the zero
    std::string show(const Word& w) const;

    /// Elements of length <= n in shortlex order.
    std::vector<Word> elements(int max_length) const;

    json to_json() const;
    static WordMonoid from_json(const json& j);

private:
    std::vector<std::string> gens_;
    bool right_zero_;
};

/// Closed forms: alpha satisfies (LE) iff it contains the right zero
/// (M alpha is then a singleton); without a zero the monoid is cancellative.
bool satisfies_LE(const WordMonoid& m, const WordMonoid::Word& alpha);
Verdict is_ramsey_element(const WordMonoid& m, const WordMonoid::Word& alpha);
Verdict has_weak_ramsey_property(const WordMonoid& m);

/// Re-checks a parity certificate: the colouring "number of generator
/// occurrences after the last zero, mod 2" separates e x alpha from e alpha
/// for every e up to the given length.
bool check_parity_certificate(const WordMonoid& m, const WordMonoid::Word& alpha, int generator, int max_length);

// ---------------------------------------------------------------------------

/// A finite monoid as a one-object category; arrows carry {element}.
class MonoidCategory : public Category {
public:
    explicit MonoidCategory(FiniteMonoid m) : m_(std::move(m)) {}

    const FiniteMonoid& monoid() const { return m_; }
    Arrow element(int x) const { return {0, 0, {x}}; }

    std::string name() const override { return "monoid"; }
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId) const override { return 1; }
    std::string object_key(ObjectId) const override { return "*"; }
    json object_json(ObjectId) const override { return "*"; }
    ObjectId object_from_json(const json&) const override { return 0; }
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override;
    Arrow identity(ObjectId) const override { return element(m_.unit()); }
    bool is_arrow(const Arrow& f) const override;
    json arrow_json(const Arrow& f) const override;
    std::optional<int> finite_max_grade() const override { return 1; }

private:
    FiniteMonoid m_;
};

/// A word monoid as a one-object category. Hom listings are truncated at
/// `max_length`, so the category is not locally finite; Ramsey questions are
/// answered by the closed forms.
class WordMonoidCategory : public Category {
public:
    WordMonoidCategory(WordMonoid m, int max_length) : m_(std::move(m)), max_length_(max_length) {}

    const WordMonoid& monoid() const { return m_; }
    Arrow element(const WordMonoid::Word& w) const { return {0, 0, m_.normalize(w)}; }

    std::string name() const override { return "word-monoid"; }
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId) const override { return 1; }
    std::string object_key(ObjectId) const override { return "*"; }
    json object_json(ObjectId) const override { return "*"; }
    ObjectId object_from_json(const json&) const override { return 0; }
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override;
    Arrow identity(ObjectId) const override { return element({}); }
    bool is_arrow(const Arrow& f) const override;
    json arrow_json(const Arrow& f) const override { return m_.show(f.data); }
    bool locally_finite() const override { return false; }
    std::optional<Verdict> ramsey_closed_form(const Arrow& alpha) const override;

private:
    WordMonoid m_;
    int max_length_;
};

} // namespace wfr
