#include <gtest/gtest.h>

#include "autoindex/core.h"

using namespace autoindex;

namespace {

constexpr AttrId x = 0, y = 1, z = 2;

}  // namespace

TEST(Schema, AnonymousNamesFollowArity) {
    EXPECT_EQ(Schema::anonymous(3).names(), (std::vector<std::string>{"x", "y", "z"}));
    EXPECT_EQ(Schema::anonymous(4).names(), (std::vector<std::string>{"a0", "a1", "a2", "a3"}));
    EXPECT_EQ(Schema::anonymous(3).find("y"), AttrId{1});
    EXPECT_FALSE(Schema::anonymous(3).find("w").has_value());
}

TEST(Schema, RejectsInvalidNames) {
    EXPECT_THROW(Schema({"a", "a"}), std::invalid_argument);
    EXPECT_THROW(Schema({"a", ""}), std::invalid_argument);
    std::vector<std::string> many;
    for (int i = 0; i < 65; ++i) many.push_back("a" + std::to_string(i));
    EXPECT_THROW(Schema{many}, std::invalid_argument);
}

TEST(Search, SetOperations) {
    const Search xy{x, y};
    EXPECT_EQ(xy.size(), 2u);
    EXPECT_TRUE(xy.contains(y));
    EXPECT_FALSE(xy.contains(z));
    EXPECT_TRUE(Search{x}.is_subset_of(xy));
    EXPECT_TRUE(is_strict_subset(Search{x}, xy));
    EXPECT_FALSE(is_strict_subset(xy, xy));
    EXPECT_EQ(xy.with(z), (Search{x, y, z}));
    EXPECT_EQ((Search{x, y, z}).minus(xy), Search{z});
    EXPECT_EQ((Search{z, x}).attributes(), (std::vector<AttrId>{x, z}));
}

TEST(Search, CanonicalOrderIsCardinalityThenMask) {
    EXPECT_LT(Search{z}, (Search{x, y}));
    EXPECT_LT((Search{x, y}), (Search{x, z}));
    EXPECT_LT(Search{x}, Search{y});
}

TEST(SearchSet, DeduplicatesAndSorts) {
    SearchSet q{{x, y, z}, {x, z}, {x}, {x, y}, {x}};
    ASSERT_EQ(q.size(), 4u);
    EXPECT_EQ(q[0], Search{x});
    EXPECT_EQ(q[1], (Search{x, y}));
    EXPECT_EQ(q[2], (Search{x, z}));
    EXPECT_EQ(q[3], (Search{x, y, z}));
    EXPECT_FALSE(q.insert(Search{x}));
    EXPECT_EQ(q.position(Search{x, z}), 2u);
    EXPECT_EQ(q.attributes(), (Search{x, y, z}));
}

TEST(LexOrder, ValidatesAndExtends) {
    EXPECT_THROW(LexOrder(std::vector<AttrId>{}), std::invalid_argument);
    EXPECT_THROW(LexOrder({x, x}), std::invalid_argument);
    const LexOrder xz({x, z});
    EXPECT_EQ(xz.attributes(), (Search{x, z}));
    EXPECT_EQ(xz.extended_to(3), LexOrder({x, z, y}));
    EXPECT_TRUE(LexOrder({x, z, y}).starts_with(xz));
    EXPECT_FALSE(xz.starts_with(LexOrder({x, z, y})));
}

TEST(LexOrder, PrefixSets) {
    const LexOrder xyz({x, y, z});
    EXPECT_EQ(prefix_set(xyz, 0), Search{});
    EXPECT_EQ(prefix_set(xyz, 1), Search{x});
    EXPECT_EQ(prefix_set(xyz, 2), (Search{x, y}));
    EXPECT_EQ(prefix_set(xyz, 3), (Search{x, y, z}));
}

TEST(IndexSet, KeepsInsertionOrderWithoutDuplicates) {
    IndexSet l{LexOrder({x, z}), LexOrder({x, y, z}), LexOrder({x, z})};
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], LexOrder({x, z}));
    EXPECT_TRUE(l.contains(LexOrder({x, y, z})));
}

TEST(Chain, RequiresStrictIncrease) {
    Chain c;
    c.push_back(Search{x});
    c.push_back(Search{x, y});
    EXPECT_THROW(c.push_back(Search{x, z}), std::invalid_argument);
    EXPECT_THROW(c.push_back(Search{x, y}), std::invalid_argument);
    EXPECT_TRUE(c.contains(Search{x, y}));
}

TEST(Cover, MotivatingIndexesCoverAllSearches) {
    const SearchSet q{{x}, {x, y}, {x, z}, {x, y, z}};
    const IndexSet l{LexOrder({x, y, z}), LexOrder({x, z})};
    EXPECT_TRUE(l_cover(q, l));
    EXPECT_FALSE(l_cover(q, IndexSet{LexOrder({x, y, z})}));

    ChainCover c;
    c.add(Chain({Search{x}, Search{x, y}, Search{x, y, z}}));
    c.add(Chain({Search{x, z}}));
    EXPECT_TRUE(c_cover(q, c));
    EXPECT_TRUE(is_partition(q, c));

    ChainCover overlapping = c;
    overlapping.add(Chain({Search{x}, Search{x, z}}));
    EXPECT_TRUE(c_cover(q, overlapping));
    EXPECT_FALSE(is_partition(q, overlapping));
}

TEST(Render, UsesSchemaNamesWhenGiven) {
    const Schema s = Schema::anonymous(3);
    EXPECT_EQ(to_string(Search{x, y}, &s), "{x,y}");
    EXPECT_EQ(to_string(LexOrder({x, y, z}), &s), "x ≺ y ≺ z");
    EXPECT_EQ(to_string(Chain({Search{x}, Search{x, y}}), &s), "{x} ⊂ {x,y}");
    EXPECT_EQ(to_string(Search{}, &s), "{}");
}
