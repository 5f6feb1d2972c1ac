#pragma once

#include <map>
#include <mutex>
#include <unordered_map>

#include "wfr/category.hpp"
#include "wfr/tree.hpp"
#include "wfr/tree_morphism.hpp"

namespace wfr {

/// Finite lexicographic trees with splitting degrees in M and the morphisms
/// of the chosen variant; arrow data is the node map.
class TreeCategory : public Category {
public:
    TreeCategory(std::vector<int> M, TreeVariant variant);

    const std::vector<int>& M() const { return M_; }
    const TreeVariant& variant() const { return variant_; }
    MorphismFlags flags() const { return MorphismFlags::for_variant(variant_); }

    ObjectId object(const LexTree& t) const;
    const LexTree& value(ObjectId id) const;
    Arrow arrow(const LexTree& dom, const LexTree& cod, std::vector<int> map) const;

    std::string name() const override;
    std::vector<ObjectId> objects(int max_grade) const override;
    int grade(ObjectId x) const override { return value(x).size(); }
    std::string object_key(ObjectId x) const override { return store_.key(x); }
    json object_json(ObjectId x) const override { return value(x).to_json(); }
    ObjectId object_from_json(const json& j) const override;
    std::vector<Arrow> hom(ObjectId a, ObjectId b) const override;
    bool has_arrow(ObjectId a, ObjectId b) const override;
    Arrow compose(const Arrow& g, const Arrow& f) const override;
    Arrow identity(ObjectId a) const override;
    bool is_arrow(const Arrow& f) const override;
    std::optional<Cocone> propose_cocone(const Arrow& f, const Arrow& g) const override;
    std::optional<json> obstruction(const Arrow& f, const Arrow& g) const override;
    bool check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const override;
    std::vector<ObjectId> cofinal_objects(int max_grade) const override;
    std::optional<ObjectId> initial_object() const override;
    std::vector<Arrow> extensions(ObjectId x, int depth) const override;
    std::vector<Arrow> arrows_extending(ObjectId a, ObjectId b, const std::vector<int>& partial,
                                        std::size_t limit) const override;

private:
    std::optional<Cocone> amalgamate_span(const Arrow& f, const Arrow& g) const;

    std::vector<int> M_;
    TreeVariant variant_;
    mutable ObjectStore<LexTree> store_;
    mutable std::mutex cache_mutex_;
    mutable std::map<int, std::vector<ObjectId>> by_size_;
    mutable std::unordered_map<std::uint64_t, std::vector<Arrow>> hom_cache_;
    mutable std::unordered_map<std::uint64_t, bool> arrow_exists_;

    struct SpanHash {
        std::size_t operator()(const std::pair<Arrow, Arrow>& s) const noexcept
        {
            ArrowHash h;
            return h(s.first) * 1000003u ^ h(s.second);
        }
    };
    static constexpr std::size_t cocone_cache_limit = 1u << 20;
    mutable std::unordered_map<std::pair<Arrow, Arrow>, std::optional<Cocone>, SpanHash> cocones_;
};

} // namespace wfr
