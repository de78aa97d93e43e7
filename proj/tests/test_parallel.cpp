#include <gtest/gtest.h>

#include <stdexcept>
#include <vector>

#include "henon/parallel.hpp"

using henon::parallel_map;

TEST(ParallelMap, PreservesOrder) {
  std::vector<int> in(257);
  for (int i = 0; i < 257; ++i) in[i] = i;
  for (unsigned t : {1u, 2u, 7u, 1000u}) {
    const auto out = parallel_map(in, [](int x) { return x * x; }, t);
    ASSERT_EQ(out.size(), in.size());
    for (int i = 0; i < 257; ++i) EXPECT_EQ(out[i], i * i);
  }
  EXPECT_TRUE(parallel_map(std::vector<int>{}, [](int x) { return x; }, 4).empty());
}

TEST(ParallelMap, RethrowsLowestFailingIndex) {
  std::vector<int> in{0, 1, 2, 3, 4, 5, 6, 7};
  for (unsigned t : {1u, 4u}) {
    try {
      parallel_map(in, [](int x) -> int {
        if (x == 3 || x == 6) throw std::runtime_error(std::to_string(x));
        return x;
      }, t);
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "3");
    }
  }
}
