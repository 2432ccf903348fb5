#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <numeric>
#include <vector>

#include "lexsel/dataset.hpp"

using namespace lexsel;

TEST_CASE("synthetic generator shape and target law") {
    const auto d = gen_uball5d(100, 42);
    REQUIRE(d.samples() == 100);
    REQUIRE(d.width == 5);
    CHECK(d.feature_names == std::vector<std::string>{"x1", "x2", "x3", "x4", "x5"});

    for (std::size_t s = 0; s < d.samples(); ++s) {
        double ss = 0.0;
        for (const auto x : d.sample(s)) {
            CHECK(x >= 0.05);
            CHECK(x <= 6.05);
            ss += (x - 3.0) * (x - 3.0);
        }
        CHECK(d.target[s] == doctest::Approx(10.0 / (5.0 + ss)).epsilon(1e-12));
        CHECK(d.target[s] > 0.0);
        CHECK(d.target[s] <= 2.0);
    }
    // the target peaks at 2 when every input hits the center of the box
    CHECK(10.0 / (5.0 + 0.0) == 2.0);

    CHECK(gen_uball5d(50, 7).to_csv() == gen_uball5d(50, 7).to_csv());
    CHECK(gen_uball5d(50, 7).to_csv() != gen_uball5d(50, 8).to_csv());
    CHECK_THROWS_AS((void)gen_uball5d(0, 1), std::invalid_argument);
}

TEST_CASE("CSV round trip preserves every value") {
    const auto d = gen_uball5d(25, 9);
    const auto r = load_csv_text(d.to_csv(), "y");
    CHECK(r.rejected_rows == 0);
    REQUIRE(r.data.samples() == d.samples());
    REQUIRE(r.data.width == d.width);
    CHECK(r.data.features == d.features);
    CHECK(r.data.target == d.target);
    CHECK(r.data.feature_names == d.feature_names);
}

TEST_CASE("CSV loading rules") {
    const std::string text = "a,y,b\n1,2,3\nbad,5,6\n7,8\n9,10,11\n";
    const auto r = load_csv_text(text, "y");
    CHECK(r.rejected_rows == 2);
    REQUIRE(r.data.samples() == 2);
    CHECK(r.data.width == 2);
    CHECK(r.data.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(r.data.target == std::vector<double>{2, 10});
    CHECK(r.data.features == std::vector<double>{1, 3, 9, 11});

    CHECK_THROWS_AS((void)load_csv_text(text, "missing"), std::invalid_argument);
    CHECK_THROWS_AS((void)load_csv_text("", "y"), std::invalid_argument);
    CHECK_THROWS_AS((void)load_csv_text("a,y\nbad,1\n", "y"), std::invalid_argument);
    CHECK_THROWS_AS((void)load_csv("/nonexistent/path.csv", "y"), std::invalid_argument);
}

TEST_CASE("subset picks rows in order") {
    const auto d = gen_uball5d(10, 3);
    const std::vector<std::size_t> idx = {7, 2, 2};
    const auto s = d.subset(idx);
    REQUIRE(s.samples() == 3);
    CHECK(s.width == d.width);
    CHECK(std::equal(s.sample(0).begin(), s.sample(0).end(), d.sample(7).begin()));
    CHECK(std::equal(s.sample(1).begin(), s.sample(1).end(), d.sample(2).begin()));
    CHECK(std::equal(s.sample(2).begin(), s.sample(2).end(), d.sample(2).begin()));
    CHECK(s.target == std::vector<double>{d.target[7], d.target[2], d.target[2]});
}

TEST_CASE("train test split partitions the sample range") {
    const auto split = train_test_split(10, 0.7, 1);
    CHECK(split.train.size() == 7);
    CHECK(split.test.size() == 3);

    std::vector<std::size_t> all(split.train);
    all.insert(all.end(), split.test.begin(), split.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> want(10);
    std::iota(want.begin(), want.end(), std::size_t{0});
    CHECK(all == want);

    // reproducible, and seeds actually matter
    CHECK(train_test_split(10, 0.7, 1).train == split.train);
    bool any_differs = false;
    for (std::uint64_t s = 2; s < 8 && !any_differs; ++s)
        any_differs = train_test_split(10, 0.7, s).train != split.train;
    CHECK(any_differs);

    // extreme fractions still leave one sample on each side
    CHECK(train_test_split(5, 0.01, 2).train.size() == 1);
    CHECK(train_test_split(5, 0.99, 2).test.size() == 1);

    CHECK_THROWS_AS((void)train_test_split(1, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)train_test_split(10, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)train_test_split(10, 1.0, 0), std::invalid_argument);
}
