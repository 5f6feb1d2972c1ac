#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wfr/verdict.hpp"

namespace wfr {

using ObjectId = std::uint32_t;

/// An arrow of an enumerable category. For concrete categories `data` is the
/// underlying map (data[i] = image of element i of the domain); for one-object
/// categories it holds the element.
struct Arrow {
    ObjectId dom = 0;
    ObjectId cod = 0;
    std::vector<int> data;

    friend bool operator==(const Arrow&, const Arrow&) = default;
    friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

struct ArrowHash {
    std::size_t operator()(const Arrow& a) const noexcept;
};

struct Cocone {
    ObjectId apex = 0;
    Arrow left;   // out of the codomain of the first leg
    Arrow right;  // out of the codomain of the second leg
};

/// A (possibly infinite) category seen through a size-graded object
/// enumeration. Object handles are interned values; hom listings are in
/// canonical order (codomain fixed, lexicographic by data).
class Category {
public:
    virtual ~Category() = default;

    virtual std::string name() const = 0;

    /// All objects of grade <= max_grade, ordered by (grade, canonical key).
    virtual std::vector<ObjectId> objects(int max_grade) const = 0;
    virtual int grade(ObjectId x) const = 0;
    virtual std::string object_key(ObjectId x) const = 0;
    virtual json object_json(ObjectId x) const = 0;
    /// Inverse of object_json; interns the parsed object.
    virtual ObjectId object_from_json(const json& j) const;

    virtual std::vector<Arrow> hom(ObjectId a, ObjectId b) const = 0;
    virtual bool has_arrow(ObjectId a, ObjectId b) const { return !hom(a, b).empty(); }
    virtual Arrow compose(const Arrow& g, const Arrow& f) const = 0;
    virtual Arrow identity(ObjectId a) const = 0;
    virtual bool is_arrow(const Arrow& f) const = 0;
    virtual json arrow_json(const Arrow& f) const;

    /// Every object has grade <= the returned bound (the category is finite).
    virtual std::optional<int> finite_max_grade() const { return std::nullopt; }
    virtual bool locally_finite() const { return true; }

    /// Backend amalgamation: a cocone for the span (f, g), or nothing.
    /// The generic code re-checks every proposal.
    virtual std::optional<Cocone> propose_cocone(const Arrow& f, const Arrow& g) const;
    /// Backend certificate that the span (f, g) has no cocone at all.
    virtual std::optional<json> obstruction(const Arrow& f, const Arrow& g) const;
    virtual bool check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const;

    /// Objects every fragment object maps into; lets amalgamability checks
    /// restrict spans to legs ending there. Empty means no reduction.
    virtual std::vector<ObjectId> cofinal_objects(int max_grade) const;
    virtual std::optional<ObjectId> initial_object() const { return std::nullopt; }
    /// Arrows out of x built by up to `depth` rounds of one-step extensions.
    virtual std::vector<Arrow> extensions(ObjectId x, int depth) const;
    /// Arrows a -> b agreeing with `partial` wherever partial[i] >= 0.
    virtual std::vector<Arrow> arrows_extending(ObjectId a, ObjectId b, const std::vector<int>& partial,
                                                std::size_t limit) const;
    /// Closed-form Ramsey verdict when the backend has one.
    virtual std::optional<Verdict> ramsey_closed_form(const Arrow& alpha) const;
};

/// Interned object values keyed by canonical strings. Interning is a cache:
/// the same value always maps to the same handle within one store.
template <class V>
class ObjectStore {
public:
    ObjectId intern(V value, const std::string& key)
    {
        std::lock_guard lock(m_);
        auto it = index_.find(key);
        if (it != index_.end())
            return it->second;
        auto id = static_cast<ObjectId>(values_.size());
        values_.push_back(std::make_shared<const V>(std::move(value)));
        keys_.push_back(key);
        index_.emplace(key, id);
        return id;
    }

    std::optional<ObjectId> find(const std::string& key) const
    {
        std::lock_guard lock(m_);
        auto it = index_.find(key);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::shared_ptr<const V> get(ObjectId id) const
    {
        std::lock_guard lock(m_);
        if (id >= values_.size())
            throw InputError("unknown object handle " + std::to_string(id));
        return values_[id];
    }

    std::string key(ObjectId id) const
    {
        std::lock_guard lock(m_);
        if (id >= keys_.size())
            throw InputError("unknown object handle " + std::to_string(id));
        return keys_[id];
    }

    bool contains(ObjectId id) const
    {
        std::lock_guard lock(m_);
        return id < values_.size();
    }

private:
    mutable std::mutex m_;
    std::vector<std::shared_ptr<const V>> values_;
    std::vector<std::string> keys_;
    std::unordered_map<std::string, ObjectId> index_;
};

/// Sort handles by (grade, canonical key).
void sort_canonically(const Category& c, std::vector<ObjectId>& objs);

/// Canonical order on arrows with a common domain: codomain grade, codomain
/// key, then data.
bool canonical_less(const Category& c, const Arrow& x, const Arrow& y);

} // namespace wfr
