/*
   Copyright 2026 The sddestab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <doctest.h>

#include <cmath>

#include "sddestab/integrator.hpp"
#include "sddestab/philox.hpp"

using namespace sddestab;

TEST_CASE("Philox4x32-10 known answers") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::apply({0, 0, 0, 0}, {0, 0}) ==
          C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::apply({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                            {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::apply({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    static_assert(Philox4x32::apply({0, 0, 0, 0}, {0, 0})[0] == 0x6627e8d5);
}

TEST_CASE("Brownian increments have the right moments") {
    const Grid grid(0.0, 1e4, 1000000);  // h = 0.01
    const auto path = WienerPath::generate(42, 0, grid, 1);
    const auto& inc = path.increments();
    REQUIRE(inc.size() == 1000000);
    double mean = 0.0;
    for (double x : inc) mean += x;
    mean /= static_cast<double>(inc.size());
    double var = 0.0;
    for (double x : inc) var += (x - mean) * (x - mean);
    var /= static_cast<double>(inc.size() - 1);
    CHECK(std::abs(mean) <= 4.0 * std::sqrt(0.01 / 1e6));
    CHECK(std::abs(var - 0.01) <= 3.0 * 0.01 * std::sqrt(2.0 / 1e6));
}

TEST_CASE("streams are reproducible and distinct") {
    const Grid grid(0.0, 1.0, 64);
    const auto a = WienerPath::generate(7, 3, grid, 2);
    const auto b = WienerPath::generate(7, 3, grid, 2);
    CHECK(a.increments() == b.increments());
    CHECK(a.steps() == 64);
    CHECK(a.wiener_dimension() == 2);
    CHECK(a.step(5).size() == 2);
    CHECK(WienerPath::generate(7, 4, grid, 2).increments() != a.increments());
    CHECK(WienerPath::generate(8, 3, grid, 2).increments() != a.increments());
    CHECK(standard_normal(1, 2, 3) == standard_normal(1, 2, 3));
    CHECK(standard_normal(1, 2, 3) != standard_normal(1, 2, 4));
    // draws do not depend on how much of the stream was consumed before
    const Grid longer(0.0, 2.0, 128);
    const auto c = WienerPath::generate(7, 3, longer, 2);
    for (std::size_t i = 0; i < 64 * 2; ++i) CHECK(c.increments()[i] == a.increments()[i]);
}

TEST_CASE("coarsening sums consecutive increments") {
    const Grid grid(0.0, 1.0, 8);
    const auto p = WienerPath::generate(1, 0, grid, 1);
    const auto c = p.coarsened(4);
    REQUIRE(c.steps() == 2);
    CHECK(c.step(0)[0] == doctest::Approx(p.step(0)[0] + p.step(1)[0] + p.step(2)[0] +
                                          p.step(3)[0]));
    CHECK_THROWS_AS(p.coarsened(3), ParameterError);
    const auto w = WienerPath::from_increments({0.1, 0.2, 0.3}, 3, 1);
    CHECK(w.step(2)[0] == 0.3);
    CHECK_THROWS_AS(WienerPath::from_increments({0.1}, 3, 1), ParameterError);
}
