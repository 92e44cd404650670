#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "slicesim/config.hpp"
#include "slicesim/mcs.hpp"

using namespace slicesim;

namespace {

// Independent composition counter: walks the composition tree instead of
// using the closed form, so the enumeration length has a second route.
std::uint64_t count_compositions(int chunks, int slots) {
    if (slots == 1) {
        return 1;
    }
    std::uint64_t total = 0;
    for (int take = 0; take <= chunks; ++take) {
        total += count_compositions(chunks - take, slots - 1);
    }
    return total;
}

SystemConfig make_config(int capacity, int chunk) {
    SystemConfig cfg;
    cfg.capacity_prbs = capacity;
    cfg.chunk_prbs = chunk;
    return cfg;
}

}  // namespace

TEST_CASE("two slices over 100 PRBs in chunks of 10 give 11 arms") {
    const auto arms = enumerate_arms(2, make_config(100, 10));
    REQUIRE(arms.size() == 11);
    CHECK(arms.front().prbs == std::vector<int>{0, 100});
    CHECK(arms[1].prbs == std::vector<int>{10, 90});
    CHECK(arms.back().prbs == std::vector<int>{100, 0});
}

TEST_CASE("three slices over 100 PRBs in chunks of 10 give 66 arms") {
    CHECK(enumerate_arms(3, make_config(100, 10)).size() == 66);
}

TEST_CASE("single slice has exactly one arm") {
    const auto arms = enumerate_arms(1, make_config(100, 10));
    REQUIRE(arms.size() == 1);
    CHECK(arms[0].prbs == std::vector<int>{100});
}

TEST_CASE("enumeration length matches the recursive composition counter") {
    for (int slices = 1; slices <= 6; ++slices) {
        for (int chunks = 1; chunks <= 20; ++chunks) {
            const auto cfg = make_config(chunks * 10, 10);
            const auto arms = enumerate_arms(slices, cfg);
            CHECK(arms.size() == count_compositions(chunks, slices));
            CHECK(arms.size() == arm_count(slices, chunks));
        }
    }
}

TEST_CASE("every arm sums to capacity, is chunk granular and lexicographic") {
    const auto cfg = make_config(60, 5);
    const auto arms = enumerate_arms(3, cfg);
    std::vector<int> previous;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        CHECK(arms[i].arm_index == static_cast<int>(i));
        int total = 0;
        for (int y : arms[i].prbs) {
            CHECK(y % cfg.chunk_prbs == 0);
            CHECK(y >= 0);
            total += y;
        }
        CHECK(total == cfg.capacity_prbs);
        if (!previous.empty()) {
            CHECK(previous < arms[i].prbs);
        }
        previous = arms[i].prbs;
    }
}

TEST_CASE("arm enumeration rejects bad inputs") {
    CHECK_THROWS_AS(enumerate_arms(0, make_config(100, 10)), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_arms(2, make_config(100, 7)), std::invalid_argument);
}

TEST_CASE("system config invariants are enforced") {
    SystemConfig cfg;
    cfg.reward_exponent = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.reward_exponent = 0.5;
    cfg.channel_levels = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.channel_levels = 4;
    cfg.epoch_ttis = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("mcs lookup below the lowest threshold gives no service") {
    const auto table = McsTable::lte_default();
    CHECK(table.lookup(-30.0).bits_per_prb_tti == 0);
    CHECK(table.lookup(-30.0).mcs_index == -1);
}

TEST_CASE("mcs lookup saturates above the highest threshold") {
    const auto table = McsTable::lte_default();
    CHECK(table.lookup(60.0).bits_per_prb_tti == table.entries().back().bits_per_prb_tti);
}

TEST_CASE("mcs lookup at an interior threshold selects that entry") {
    const auto table = McsTable::lte_default();
    for (const auto& entry : table.entries()) {
        CHECK(table.lookup(entry.snr_threshold_db).mcs_index == entry.mcs_index);
        CHECK(table.lookup(entry.snr_threshold_db).bits_per_prb_tti == entry.bits_per_prb_tti);
    }
}

TEST_CASE("mcs lookup is monotone in snr") {
    const auto table = McsTable::lte_default();
    int prev = 0;
    for (double snr = -12.0; snr <= 32.0; snr += 0.25) {
        const int bits = table.lookup(snr).bits_per_prb_tti;
        CHECK(bits >= prev);
        prev = bits;
    }
}

TEST_CASE("shipped table file matches the embedded default") {
    const auto from_file = McsTable::load(std::string(TEST_DATA_DIR) + "/mcs_table.txt");
    const auto embedded = McsTable::lte_default();
    REQUIRE(from_file.entries().size() == embedded.entries().size());
    for (std::size_t i = 0; i < embedded.entries().size(); ++i) {
        CHECK(from_file.entries()[i].snr_threshold_db ==
              doctest::Approx(embedded.entries()[i].snr_threshold_db));
        CHECK(from_file.entries()[i].mcs_index == embedded.entries()[i].mcs_index);
        CHECK(from_file.entries()[i].bits_per_prb_tti == embedded.entries()[i].bits_per_prb_tti);
    }
}

TEST_CASE("mcs table validation") {
    CHECK_THROWS_AS(McsTable({{0.0, 1, 10}, {0.0, 2, 20}}), std::invalid_argument);
    CHECK_THROWS_AS(McsTable({{0.0, 1, 20}, {1.0, 2, 10}}), std::invalid_argument);
    CHECK_THROWS_AS(McsTable({}), std::invalid_argument);
}
