#include "doctest.h"
#include "pivotsense/core.hpp"

#include <cmath>
#include <limits>

using namespace pivotsense;

TEST_CASE("grid positions are placed per marker, not accumulated") {
    MarkerGrid g(7, 11, 0.1, {-3.0, 2.5});
    CHECK(g.size() == 77);
    for (MarkerIndex i = 0; i < g.size(); ++i) {
        const Vec2 p = g.reference_position(i);
        CHECK(p.x == -3.0 + static_cast<double>(g.col_of(i)) * 0.1);
        CHECK(p.y == 2.5 + static_cast<double>(g.row_of(i)) * 0.1);
    }
    CHECK(g.index(3, 4) == 37);
    CHECK(g.row_of(37) == 3);
    CHECK(g.col_of(37) == 4);
}

TEST_CASE("grid rejects degenerate shapes") {
    CHECK_THROWS_AS(MarkerGrid(1, 5, 1.0), UsageError);
    CHECK_THROWS_AS(MarkerGrid(5, 1, 1.0), UsageError);
    CHECK_THROWS_AS(MarkerGrid(5, 5, 0.0), UsageError);
    CHECK_THROWS_AS(MarkerGrid(5, 5, -1.0), UsageError);
    CHECK_THROWS_AS(MarkerGrid(5, 5, std::numeric_limits<double>::quiet_NaN()), UsageError);
    MarkerGrid g(3, 3, 1.0);
    CHECK_THROWS_AS(g.reference_position(9), UsageError);
}

TEST_CASE("center and half extent") {
    MarkerGrid g(20, 20, 1.0);
    CHECK(g.center() == Vec2{9.5, 9.5});
    CHECK(g.half_extent() == doctest::Approx(9.5));
    MarkerGrid wide(5, 9, 2.0, {1.0, 1.0});
    CHECK(wide.center() == Vec2{9.0, 5.0});
    CHECK(wide.half_extent() == doctest::Approx(4.0));
}

TEST_CASE("neighbors at corners, edges and interior") {
    MarkerGrid g(4, 5, 1.0);
    const auto corner = g.neighbors(0);
    CHECK_FALSE(corner.left);
    CHECK_FALSE(corner.up);
    CHECK(corner.right == 1u);
    CHECK(corner.down == 5u);

    const auto last = neighbor_indices(g, 19);
    CHECK(last.left == 18u);
    CHECK(last.up == 14u);
    CHECK_FALSE(last.right);
    CHECK_FALSE(last.down);

    const auto mid = g.neighbors(g.index(2, 2));
    CHECK(mid.left == 11u);
    CHECK(mid.right == 13u);
    CHECK(mid.up == 7u);
    CHECK(mid.down == 17u);
}

TEST_CASE("neighbor relation is symmetric") {
    MarkerGrid g(6, 4, 1.0);
    for (MarkerIndex i = 0; i < g.size(); ++i) {
        for (const auto& n : g.neighbors(i).as_array()) {
            if (!n) continue;
            bool back = false;
            for (const auto& m : g.neighbors(*n).as_array()) back = back || (m && *m == i);
            CHECK(back);
        }
    }
}

TEST_CASE("rotate is counter-clockwise in degrees") {
    const Vec2 r = rotate({1.0, 0.0}, 90.0);
    CHECK(r.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.y == doctest::Approx(1.0));
    const Vec2 q = rotate({2.0, 1.0}, -30.0);
    CHECK(norm(q) == doctest::Approx(std::sqrt(5.0)));
    CHECK(rad_to_deg(std::atan2(cross({2.0, 1.0}, q), dot({2.0, 1.0}, q))) == doctest::Approx(-30.0));
}

TEST_CASE("frame validation") {
    MarkerGrid g(2, 2, 1.0);
    Frame f{0.0, std::vector<Vec3>(4)};
    CHECK_NOTHROW(f.validate(g));
    f.displacements.pop_back();
    CHECK_THROWS_AS(f.validate(g), UsageError);
    f.displacements.push_back({std::numeric_limits<double>::quiet_NaN(), 0, 0});
    CHECK_THROWS_AS(f.validate(g), UsageError);
    f.displacements.back() = {0, 0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(f.validate(g), UsageError);
}

TEST_CASE("contact state names round-trip") {
    for (auto s : {ContactState::NoContact, ContactState::Stick, ContactState::IncipientSlip, ContactState::MacroSlip}) {
        CHECK(contact_state_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(contact_state_from_string("Sliding"), UsageError);
}

TEST_CASE("softness validation") {
    CHECK(SoftnessParams{}.is_rigid());
    CHECK_NOTHROW(SoftnessParams{0.2, 0.1, -0.1}.validate());
    CHECK_FALSE(SoftnessParams{0.2, 0.0, 0.0}.is_rigid());
    CHECK_THROWS_AS((SoftnessParams{-0.1, 0.0, 0.0}.validate()), UsageError);
    CHECK_THROWS_AS((SoftnessParams{0.0, std::numeric_limits<double>::quiet_NaN(), 0.0}.validate()), UsageError);
}
