#include "linx/error.hpp"
#include "linx/json_io.hpp"

#include <gtest/gtest.h>

using namespace linx;

TEST(JsonTree, DictOfLeaves)
{
    const TreeVector v = tree_from_json(Json::parse(R"({"a": [1.0, 2.0], "b": [[3.0, 4.0]]})"));
    EXPECT_EQ(flatten(v), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_EQ(v.structure(),
              TreeStructure::dict({{"a", TreeStructure::leaf({2})}, {"b", TreeStructure::leaf({1, 2})}}));
}

TEST(JsonTree, KeyOrderAsWritten)
{
    const TreeVector v = tree_from_json(Json::parse(R"({"z": 1, "a": 2})"));
    EXPECT_EQ(flatten(v), (std::vector<double>{1, 2}));
    EXPECT_EQ(v.structure().keys(), (std::vector<std::string>{"z", "a"}));
}

TEST(JsonTree, RaggedArraysBecomeLists)
{
    const TreeVector v = tree_from_json(Json::parse(R"([[1, 2], [3], {"c": 4}])"));
    EXPECT_EQ(v.structure().kind(), TreeStructure::Kind::list);
    EXPECT_EQ(flatten(v), (std::vector<double>{1, 2, 3, 4}));
    EXPECT_EQ(v.structure().num_leaves(), 3u);
}

TEST(JsonTree, RoundTrip)
{
    for (const char* text : {R"({"a":[1.5,2.0],"b":[[3.0,4.0],[5.0,6.0]],"c":7.0})", R"([1.0,2.0,3.0])",
                             R"({"x":{"y":[0.1]}})"}) {
        const Json j = Json::parse(text);
        EXPECT_EQ(tree_to_json(tree_from_json(j)), j) << text;
    }
}

TEST(JsonTree, RejectsNonNumbers)
{
    EXPECT_THROW(tree_from_json(Json::parse(R"({"a": "x"})")), ParseError);
    EXPECT_THROW(tree_from_json(Json::parse(R"([true])")), ParseError);
}
