#pragma once

#include "wfr/category.hpp"

namespace wfr {

/// The arrow extension of a base category: objects are base arrows
/// alpha: a -> a'; arrows (a, alpha) -> (b, beta) are the base arrows a -> b
/// of the form h o alpha, plus identities. Objects range over base arrows
/// between base objects of grade <= base_max_grade; apexes of proposed
/// cocones may lie beyond that bound.
class ArrowExtensionCategory : public Category {
public:
    ArrowExtensionCategory(const Category& base, int base_max_grade);

    const Category& base() const { return base_; }
    /// The extension object (a, alpha).
    ObjectId object_of(const Arrow& alpha) const;
    /// The base arrow underlying an extension object.
    Arrow base_arrow_of(ObjectId x) const;
    /// The base arrow underlying an extension arrow.
    Arrow to_base(const Arrow& f) const;

    std::string name() const override { return "arrow-extension(" + base_.name() + ")"; }
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId x) const override;
    std::string object_key(ObjectId x) const override { return store_.key(x); }
    json object_json(ObjectId x) const override;
    ObjectId object_from_json(const json& j) const override;
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    bool has_arrow(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override;
    Arrow identity(ObjectId a) const override;
    bool is_arrow(const Arrow& f) const override;
    std::optional<int> finite_max_grade() const override;
    bool locally_finite() const override { return base_.locally_finite(); }
    std::optional<Cocone> propose_cocone(const Arrow& f, const Arrow& g) const override;
    std::optional<json> obstruction(const Arrow& f, const Arrow& g) const override;
    bool check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const override;
    std::vector<ObjectId> cofinal_objects(int max_grade) const override;
    std::optional<ObjectId> initial_object() const override;

private:
    // The pair of base legs (beta o f, gamma o g) underlying a span.
    std::pair<Arrow, Arrow> base_span(const Arrow& f, const Arrow& g) const;

    const Category& base_;
    int base_max_grade_;
    mutable ObjectStore<Arrow> store_;
};

} // namespace wfr
