#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "doctest.h"

#include "cran/mcs.hpp"
#include "test_util.hpp"

using namespace cran;
using testutil::rel_dev;

namespace {
std::string temp_path(const char* stem) {
    return (std::filesystem::temp_directory_path() / stem).string();
}
}  // namespace

TEST_SUITE("mcs") {

TEST_CASE("dB conversion round trip") {
    CHECK(mcs::db_to_linear(0.0) == 1.0);
    CHECK(rel_dev(mcs::db_to_linear(10.0), 10.0) < 1e-15);
    CHECK(rel_dev(mcs::linear_to_db(mcs::db_to_linear(-6.4)), -6.4) < 1e-14);
}

TEST_CASE("equally spaced construction: grid, rate law and validation") {
    const auto t = mcs::make_equally_spaced_table(27, -6.4, 17.6, 0.2);
    REQUIRE(t.size() == 27);
    CHECK(rel_dev(t.first_threshold(), mcs::db_to_linear(-6.4)) < 1e-14);
    CHECK(rel_dev(t.last_threshold(), mcs::db_to_linear(17.6)) < 1e-14);
    // Uniform 0.9230769... dB spacing.
    for (int k = 1; k < 27; ++k) {
        const double step = mcs::linear_to_db(t.threshold(k + 1)) -
                            mcs::linear_to_db(t.threshold(k));
        CHECK(std::fabs(step - 24.0 / 26.0) < 1e-12);
    }
    // Rate law R_k = log2(1 + threshold/nu).
    CHECK(rel_dev(t.rate(1), 0.28543318825904385) < 1e-12);
    CHECK(rel_dev(t.rate(27), 5.8061716172558802) < 1e-12);
    for (int k = 1; k <= 27; ++k) {
        CHECK(rel_dev(t.rate(k), std::log2(1.0 + t.threshold(k) / t.nu)) < 1e-14);
    }
    CHECK_NOTHROW(mcs::validate_table(t));
    // Single-entry edge case.
    const auto t1 = mcs::make_equally_spaced_table(1, -6.4, 17.6, 0.2);
    CHECK(t1.size() == 1);
    CHECK(rel_dev(t1.threshold(1), mcs::db_to_linear(-6.4)) < 1e-14);
}

TEST_CASE("construction rejects invalid arguments") {
    CHECK_THROWS_AS(mcs::make_equally_spaced_table(0, -6.4, 17.6, 0.2),
                    std::invalid_argument);
    CHECK_THROWS_AS(mcs::make_equally_spaced_table(10, 5.0, 5.0, 0.2),
                    std::invalid_argument);
    CHECK_THROWS_AS(mcs::make_equally_spaced_table(10, -6.4, 17.6, 0.0),
                    std::invalid_argument);
}

TEST_CASE("rate selection: interval membership and boundary conventions") {
    const auto t = mcs::make_equally_spaced_table(10, -6.4, 17.6, 0.2);
    // At or below the first threshold: flagged, rate of scheme 1 reported.
    const auto at_first = mcs::rate_select(t.threshold(1), 1.0, t);
    CHECK(at_first.below_first_threshold);
    CHECK(at_first.index == 1);
    // Strictly inside interval k.
    for (int k = 1; k < 10; ++k) {
        const double mid = 0.5 * (t.threshold(k) + t.threshold(k + 1));
        const auto sel = mcs::rate_select(mid, 1.0, t);
        CHECK(sel.index == k);
        CHECK(sel.rate_bits_pcu == t.rate(k));
        CHECK(!sel.below_first_threshold);
    }
    // Upper edge belongs to the lower interval: t_k < x <= t_{k+1} -> k.
    CHECK(mcs::rate_select(t.threshold(5), 1.0, t).index == 4);
    // Beyond the last threshold the top scheme is kept.
    const auto top = mcs::rate_select(t.last_threshold() * 100.0, 1.0, t);
    CHECK(top.index == 10);
    CHECK(top.rate_bits_pcu == t.rate(10));
}

TEST_CASE("rate selection margin identity and monotonicity") {
    const auto t = mcs::make_equally_spaced_table(27, -6.4, 17.6, 0.2);
    const double margin = mcs::db_to_linear(0.9);
    for (double gdb = -8.0; gdb <= 20.0; gdb += 0.13) {
        const double g = mcs::db_to_linear(gdb);
        const auto a = mcs::rate_select(g, margin, t);
        const auto b = mcs::rate_select(g / margin, 1.0, t);
        CHECK(a.index == b.index);
        CHECK(a.rate_bits_pcu == b.rate_bits_pcu);
        CHECK(a.below_first_threshold == b.below_first_threshold);
    }
    // Nondecreasing in gamma; nonincreasing in margin.
    int prev = 0;
    for (double gdb = -7.0; gdb <= 19.0; gdb += 0.05) {
        const auto sel = mcs::rate_select(mcs::db_to_linear(gdb), 1.0, t);
        const int idx = sel.below_first_threshold ? 0 : sel.index;
        CHECK(idx >= prev);
        prev = idx;
    }
    const double g = mcs::db_to_linear(9.3);
    int prev_m = 27;
    for (double mdb = 0.0; mdb <= 3.0; mdb += 0.1) {
        const auto sel = mcs::rate_select(g, mcs::db_to_linear(mdb), t);
        const int idx = sel.below_first_threshold ? 0 : sel.index;
        CHECK(idx <= prev_m);
        prev_m = idx;
    }
}

TEST_CASE("below_first_threshold predicate matches the selection flag") {
    const auto t = mcs::make_equally_spaced_table(10, -6.4, 17.6, 0.2);
    for (double gdb : {-7.0, -6.4, -6.3, 0.0, 18.0}) {
        const double g = mcs::db_to_linear(gdb);
        CHECK(mcs::below_first_threshold(g, 1.0, t) ==
              mcs::rate_select(g, 1.0, t).below_first_threshold);
    }
}

TEST_CASE("CSV round trip preserves the table") {
    const auto t = mcs::make_equally_spaced_table(27, -6.4, 17.6, 0.2);
    const std::string path = temp_path("mcs_roundtrip.csv");
    mcs::save_table(t, path);
    auto back = mcs::load_table(path);
    back.nu = t.nu;  // nu is a model parameter, not part of the CSV
    REQUIRE(back.size() == t.size());
    // The writer keeps 12 significant digits on the dB column; converting
    // back to linear magnifies that quantization by ln(10)/10 * |dB| -> a
    // worst-case relative error of about 2e-11 at the top of the range.
    for (int k = 1; k <= t.size(); ++k) {
        CHECK(rel_dev(back.threshold(k), t.threshold(k)) < 5e-11);
        CHECK(rel_dev(back.rate(k), t.rate(k)) < 5e-11);
    }
    CHECK(back.source == mcs::TableSource::loaded_from_file);
    std::remove(path.c_str());
}

TEST_CASE("CSV loader reports the offending line") {
    const std::string path = temp_path("mcs_bad.csv");
    {
        std::FILE* f = std::fopen(path.c_str(), "w");
        std::fputs("index,threshold_db,rate_bits_pcu\n1,-6.4,0.28\n2,bogus,0.5\n", f);
        std::fclose(f);
    }
    CHECK_THROWS_WITH_AS(mcs::load_table(path), doctest::Contains("line 3"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("validation rejects non-monotone tables") {
    auto t = mcs::make_equally_spaced_table(5, -6.4, 17.6, 0.2);
    std::swap(t.entries[1].threshold_snr, t.entries[2].threshold_snr);
    CHECK_THROWS_AS(mcs::validate_table(t), std::invalid_argument);
}

}  // TEST_SUITE
