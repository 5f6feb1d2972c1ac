#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wfr/category.hpp"

namespace wfr {

/// A full subcategory of `parent` cut out by a membership predicate. Object
/// handles are the parent's handles.
class FullSubcategory : public Category {
public:
    using Membership = std::function<bool(const Category& parent, ObjectId x)>;
    /// An arrow from x into some member object, when the backend knows one.
    using Retraction = std::function<std::optional<Arrow>(const Category& parent, ObjectId x)>;

    FullSubcategory(const Category& parent, std::string name, Membership member, Retraction retract = {});

    const Category& parent() const { return parent_; }
    bool contains(ObjectId x) const { return member_(parent_, x); }
    /// Validated arrow from x into a member object, if the backend provides one.
    std::optional<Arrow> retract(ObjectId x) const;

    std::string name() const override { return name_; }
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId x) const override { return parent_.grade(x); }
    std::string object_key(ObjectId x) const override { return parent_.object_key(x); }
    json object_json(ObjectId x) const override { return parent_.object_json(x); }
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    bool has_arrow(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override { return parent_.compose(g, f); }
    Arrow identity(ObjectId a) const override { return parent_.identity(a); }
    bool is_arrow(const Arrow& f) const override;
    json arrow_json(const Arrow& f) const override { return parent_.arrow_json(f); }
    std::optional<int> finite_max_grade() const override { return parent_.finite_max_grade(); }
    bool locally_finite() const override { return parent_.locally_finite(); }
    std::optional<Cocone> propose_cocone(const Arrow& f, const Arrow& g) const override;
    std::optional<json> obstruction(const Arrow& f, const Arrow& g) const override;
    bool check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const override;
    std::optional<ObjectId> initial_object() const override;
    /// The parent's extensions that end in member objects.
    std::vector<Arrow> extensions(ObjectId x, int depth) const override;
    std::vector<Arrow> arrows_extending(ObjectId a, ObjectId b, const std::vector<int>& partial,
                                        std::size_t limit) const override;

private:
    const Category& parent_;
    std::string name_;
    Membership member_;
    Retraction retract_;
};

/// A finite category given explicitly. Identities are added automatically;
/// `compositions` lists g o f for composable non-identity pairs by arrow index.
class TableCategory : public Category {
public:
    struct Generator {
        int dom;
        int cod;
        std::string label;
    };

    TableCategory(std::vector<std::string> objects, std::vector<Generator> arrows,
                  std::map<std::pair<int, int>, int> compositions);

    std::string name() const override { return "table"; }
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId) const override { return 1; }
    std::string object_key(ObjectId x) const override;
    json object_json(ObjectId x) const override { return object_key(x); }
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override;
    Arrow identity(ObjectId a) const override;
    bool is_arrow(const Arrow& f) const override;
    json arrow_json(const Arrow& f) const override;
    std::optional<int> finite_max_grade() const override { return 1; }

private:
    std::vector<std::string> objects_;
    std::vector<Generator> arrows_;  // identities first, one per object
    std::map<std::pair<int, int>, int> compositions_;
};

} // namespace wfr
