#include <doctest.h>

#include "bsdelab/step_path.hpp"

using namespace bsdelab;

TEST_CASE("constant path evaluates to its initial value everywhere") {
    StepPath p = StepPath::constant(3.5, 2.0);
    CHECK(p.dimension() == 1);
    CHECK(p.jump_count() == 0);
    CHECK(p.at1(0.0) == 3.5);
    CHECK(p.at1(1.7) == 3.5);
    CHECK(p.at1(2.0) == 3.5);
    CHECK(p.left_limit1(1.0) == 3.5);
}

TEST_CASE("right-continuity and left limits around a jump") {
    StepPath p = StepPath::scalar(0.0, 2.0, {{1.0, 1.0}});
    CHECK(p.at1(0.999999) == 0.0);
    CHECK(p.at1(1.0) == 1.0);  // cadlag: the post-jump value holds at the jump time
    CHECK(p.left_limit1(1.0) == 0.0);
    CHECK(p.at1(2.0) == 1.0);
}

TEST_CASE("jump times must be strictly increasing and inside [0, T)") {
    StepPath p = StepPath::constant(0.0, 1.0);
    p.add_jump(0.5, 1.0);
    CHECK_THROWS_AS(p.add_jump(0.5, 2.0), std::invalid_argument);  // not increasing
    CHECK_THROWS_AS(p.add_jump(0.4, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(p.add_jump(1.0, 2.0), std::invalid_argument);  // at the window end
    StepPath q = StepPath::constant(0.0, 1.0);
    CHECK_NOTHROW(q.add_jump(0.0, 1.0));  // jumps at 0 are legal
}

TEST_CASE("vector paths: norms and jump magnitudes") {
    StepPath p(std::vector<double>{0.0, 0.0}, 1.0);
    p.add_jump(0.25, std::vector<double>{3.0, 4.0});
    CHECK(p.sup_norm(1.0) == doctest::Approx(5.0));
    CHECK(p.sup_norm(0.1) == doctest::Approx(0.0));
    CHECK(p.jump_magnitude(0) == doctest::Approx(5.0));
    CHECK(euclidean_distance({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("segment bookkeeping") {
    StepPath p = StepPath::scalar(1.0, 3.0, {{1.0, 2.0}, {2.0, 3.0}});
    CHECK(p.segment_at(0.5) == 0);
    CHECK(p.segment_at(1.0) == 1);
    CHECK(p.segment_at(2.5) == 2);
    CHECK(p.segment_value(0)[0] == 1.0);
    CHECK(p.segment_value(2)[0] == 3.0);
}

TEST_CASE("text round trip is bit exact") {
    StepPath p(std::vector<double>{0.1, -2.0 / 3.0}, 1.75);
    p.add_jump(0.123456789012345, std::vector<double>{1e-17, 3.0});
    p.add_jump(1.0 / 3.0, std::vector<double>{-1.0, 0.0});
    StepPath q = StepPath::from_text(p.to_text());
    CHECK(q.dimension() == p.dimension());
    CHECK(q.window() == p.window());
    REQUIRE(q.jump_count() == p.jump_count());
    for (std::size_t j = 0; j < p.jump_count(); ++j) {
        CHECK(q.jump_time(j) == p.jump_time(j));
        CHECK(q.segment_value(j + 1) == p.segment_value(j + 1));
    }
    CHECK(q.segment_value(0) == p.segment_value(0));
}

TEST_CASE("same_values compares on the window") {
    StepPath a = StepPath::scalar(0.0, 2.0, {{1.0, 1.0}});
    StepPath b = StepPath::scalar(0.0, 2.0, {{1.0, 1.0}, {1.5, 2.0}});
    CHECK(a.same_values(b, 1.2));
    CHECK_FALSE(a.same_values(b, 2.0));
}
