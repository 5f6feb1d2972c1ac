#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wfr/category.hpp"

namespace wfr {

/// A finite almost linear order in normal form: Linear(n) is the chain
/// 0 < 1 < ... < n-1; LB(n) is that chain followed by two incomparable
/// maxima n and n+1.
class AlmostLinearOrder {
public:
    enum class Kind { Linear, LB };

    static AlmostLinearOrder linear(int n);
    static AlmostLinearOrder lb(int n);

    Kind kind() const { return kind_; }
    int chain() const { return n_; }
    int size() const { return kind_ == Kind::Linear ? n_ : n_ + 2; }
    bool is_linear() const { return kind_ == Kind::Linear; }

    bool less(int x, int y) const;
    bool comparable(int x, int y) const { return x == y || less(x, y) || less(y, x); }

    std::string key() const;
    json to_json() const;
    static AlmostLinearOrder from_json(const json& j);

    friend bool operator==(const AlmostLinearOrder&, const AlmostLinearOrder&) = default;

private:
    AlmostLinearOrder(Kind k, int n) : kind_(k), n_(n) {}
    Kind kind_;
    int n_;
};

/// An almost linear order on a labelled ground set {0..size-1}:
/// position[x] is the element of `shape` that x corresponds to.
struct LabeledOrder {
    AlmostLinearOrder shape = AlmostLinearOrder::linear(0);
    std::vector<int> position;

    bool less(int x, int y) const { return shape.less(position[x], position[y]); }
};

/// Normal form of a strict order given as a relation matrix; rejects
/// relations that are not strict orders or not almost linear.
LabeledOrder classify_order(const std::vector<std::vector<bool>>& less);

using Triple = std::array<int, 3>;

struct TernaryStructure {
    int size = 0;
    std::set<Triple> triples;

    json to_json() const;
    static TernaryStructure from_json(const json& j);
    friend bool operator==(const TernaryStructure&, const TernaryStructure&) = default;
};

struct AxiomViolation {
    std::string axiom;
    std::vector<int> tuple;
};

/// First violated axiom among antireflexivity, symmetry, transitivity and
/// linearity, scanning tuples in lexicographic order.
std::optional<AxiomViolation> check_axioms(const TernaryStructure& t);

class AxiomError : public InputError {
public:
    explicit AxiomError(AxiomViolation v);
    const AxiomViolation& violation() const { return v_; }

private:
    AxiomViolation v_;
};

TernaryStructure to_ternary(const AlmostLinearOrder& x);
TernaryStructure to_ternary(const LabeledOrder& x);
LabeledOrder from_ternary(const TernaryStructure& t);

/// The same order with the two largest elements made incomparable, when it
/// is a chain of at least two elements; otherwise unchanged. Elements keep
/// their names.
LabeledOrder forget_top_two(const AlmostLinearOrder& x);

// ---------------------------------------------------------------------------
// Arrows: one-to-one homomorphisms, given as maps.

bool is_alo_arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, const std::vector<int>& f);
bool is_embedding(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, const std::vector<int>& f);

struct ArrowClassification {
    bool embedding = true;
    /// For a refinement: true when the first maximum goes below the second.
    bool first_max_below = false;
    std::vector<int> refinement;  // dom -> Linear(dom.size())
    std::vector<int> then;        // Linear(dom.size()) -> cod, an embedding

    json to_json() const;
};

ArrowClassification classify_arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod,
                                   const std::vector<int>& f);

/// The two linear refinements LB(n) -> Linear(n+2): first with n < n+1,
/// then with n+1 < n.
std::array<std::vector<int>, 2> refinements(const AlmostLinearOrder& x);

bool is_amalgamable_alo_arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, const std::vector<int>& f);

/// All one-to-one homomorphisms dom -> cod in lexicographic order.
std::vector<std::vector<int>> alo_homomorphisms(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod);

// ---------------------------------------------------------------------------

/// Almost linear orders with one-to-one homomorphisms; the object family can
/// be all of them, only chains, or only those in the image of from_ternary
/// (the empty order, the singleton and the LB(n)).
class AloCategory : public Category {
public:
    enum class Family { All, Linear, Ternary };

    explicit AloCategory(Family family = Family::All);

    ObjectId object(const AlmostLinearOrder& x) const;
    const AlmostLinearOrder& value(ObjectId id) const;
    Arrow arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, std::vector<int> map) const;
    bool in_family(const AlmostLinearOrder& x) const;

    std::string name() const override;
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId x) const override { return value(x).size(); }
    std::string object_key(ObjectId x) const override { return value(x).key(); }
    json object_json(ObjectId x) const override { return value(x).to_json(); }
    ObjectId object_from_json(const json& j) const override;
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override;
    Arrow identity(ObjectId a) const override;
    bool is_arrow(const Arrow& f) const override;
    std::optional<Cocone> propose_cocone(const Arrow& f, const Arrow& g) const override;
    std::optional<json> obstruction(const Arrow& f, const Arrow& g) const override;
    bool check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const override;
    std::vector<ObjectId> cofinal_objects(int max_grade) const override;
    std::optional<ObjectId> initial_object() const override;
    std::vector<Arrow> extensions(ObjectId x, int depth) const override;

private:
    Family family_;
    mutable ObjectStore<AlmostLinearOrder> store_;
};

/// The chain amalgam of two embeddings of a common chain: new points of the
/// first leg come before those of the second inside every gap. Returns the
/// apex size and the two legs.
struct ChainAmalgam {
    int size = 0;
    std::vector<int> left;
    std::vector<int> right;
};

ChainAmalgam amalgamate_chains(int base, int n1, const std::vector<int>& f1, int n2, const std::vector<int>& f2);

} // namespace wfr
