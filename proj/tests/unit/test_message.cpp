#include <doctest.h>

#include "smce/error.hpp"
#include "smce/message.hpp"

using namespace smce;

TEST_CASE("padding round-trips and always adds a marker") {
    for (std::size_t len : {0u, 1u, 2u, 15u, 16u, 17u, 1024u}) {
        std::vector<std::uint8_t> data(len);
        for (std::size_t i = 0; i < len; ++i) data[i] = static_cast<std::uint8_t>(i * 37 + 1);
        const auto blocks = split_message(data, 16 * 8 / 2);
        for (const auto& b : blocks) CHECK(b.size() == 64u);
        CHECK(blocks.size() == len * 8 / 64 + 1);
        CHECK(join_message(blocks) == data);
    }
}

TEST_CASE("malformed padding") {
    CHECK_THROWS_AS(join_message({Bits(8, 0)}), FormatError);
    Bits b(16, 0);
    b[3] = 1;
    CHECK_THROWS_AS(join_message({b}), FormatError);
    CHECK_THROWS_AS(split_message({}, 0), InvalidParams);
}
