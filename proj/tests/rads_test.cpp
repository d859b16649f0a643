#include "radlite/rads.hpp"

#include <utility>

#include "doctest.h"
#include "radlite/error.hpp"
#include "radlite/rng.hpp"

using namespace radlite;
using namespace radlite::rads;

namespace {

Category cat(System system, const char* code) {
  const Category* c = Inventory::builtin().find(system, code);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("parse handles canonical and noisy category mentions") {
  const auto& inv = Inventory::builtin();

  const auto a = parse("BI-RADS 4A", inv);
  REQUIRE(a.valid());
  CHECK(a.category->system == System::kBiRads);
  CHECK(a.category->code == "4A");

  const auto b = parse("birads4a: suspicious", inv);
  REQUIRE(b.valid());
  CHECK(b.category->system == System::kBiRads);
  CHECK(b.category->code == "4A");

  CHECK_FALSE(parse("the finding is indeterminate", inv).valid());

  SUBCASE("hyphen and space variants") {
    for (const char* text : {"BI RADS 4A", "BI_RADS 4a", "bi-rads: 4A",
                             "The category is BIRADS-4A."}) {
      const auto outcome = parse(text, inv);
      REQUIRE(outcome.valid());
      CHECK(outcome.category->code == "4A");
    }
  }

  SUBCASE("code aliases after a system mention") {
    const auto li = parse("LI-RADS 4", inv);
    REQUIRE(li.valid());
    CHECK(li.category->system == System::kLiRads);
    CHECK(li.category->code == "LR-4");

    const auto ti = parse("TI-RADS 3 nodule", inv);
    REQUIRE(ti.valid());
    CHECK(ti.category->code == "TR3");
  }

  SUBCASE("self-identifying codes parse without a system mention") {
    CHECK(parse("LR-M observation", inv).category->code == "LR-M");
    CHECK(parse("lesion is TR4", inv).category->system == System::kTiRads);
    CHECK(parse("TR-Viable lesion", inv).category->system == System::kLrTr);
    CHECK(parse("TR-Viable lesion", inv).category->code == "Viable");
  }

  SUBCASE("first mention wins") {
    const auto outcome = parse("PI-RADS 3, previously BI-RADS 4", inv);
    REQUIRE(outcome.valid());
    CHECK(outcome.category->system == System::kPiRads);
    CHECK(outcome.category->code == "3");
  }

  SUBCASE("codes respect word boundaries") {
    CHECK_FALSE(parse("BI-RADS 42", inv).valid());
    CHECK_FALSE(parse("colorados", inv).valid());
  }

  SUBCASE("expected system enables bare codes") {
    CHECK_FALSE(parse("4A", inv).valid());
    const auto bare = parse("4A", inv, System::kBiRads);
    REQUIRE(bare.valid());
    CHECK(bare.category->code == "4A");
    // A different-system mention still parses as that system.
    const auto cross = parse("PI-RADS 3", inv, System::kTiRads);
    REQUIRE(cross.valid());
    CHECK(cross.category->system == System::kPiRads);
  }

  SUBCASE("treatment response via the LI-RADS TR spelling") {
    const auto outcome = parse("LI-RADS TR Viable", inv);
    REQUIRE(outcome.valid());
    CHECK(outcome.category->system == System::kLrTr);
  }
}

TEST_CASE("parse round-trips every inventory entry") {
  const auto& inv = Inventory::builtin();
  CHECK(inv.version() >= 1);
  for (const auto& entry : inv.categories()) {
    const std::string canonical = Inventory::canonical_text(entry);
    const auto outcome = parse(canonical, inv);
    REQUIRE_MESSAGE(outcome.valid(), canonical);
    CHECK_MESSAGE(*outcome.category == entry, canonical);
  }
}

TEST_CASE("validity counts valid parses") {
  const auto& inv = Inventory::builtin();
  const std::vector<std::string> outputs = {"BI-RADS 2", "pirads 5",
                                            "no category", "LR-3"};
  CHECK(validity(outputs, inv) == doctest::Approx(0.75));
  CHECK_THROWS_AS(validity({}, inv), DataError);
}

TEST_CASE("accuracy is exact match after canonicalization") {
  const auto& inv = Inventory::builtin();
  const std::vector<Category> gts = {cat(System::kBiRads, "4A"),
                                     cat(System::kTiRads, "TR3"),
                                     cat(System::kPiRads, "4")};

  SUBCASE("identity and normalization noise both score 1") {
    const std::vector<std::string> preds = {"bi rads 4a", "TI-RADS TR3",
                                            "PI-RADS 4"};
    CHECK(accuracy(preds, gts, inv) == doctest::Approx(1.0));
  }
  SUBCASE("invalid predictions score 0") {
    const std::vector<std::string> preds = {"unknown", "n/a", "none"};
    CHECK(accuracy(preds, gts, inv) == doctest::Approx(0.0));
  }
  SUBCASE("length mismatch and empty input are errors") {
    const std::vector<std::string> one = {"BI-RADS 4A"};
    CHECK_THROWS_AS(accuracy(one, gts, inv), DataError);
    CHECK_THROWS_AS(accuracy({}, {}, inv), DataError);
  }
}

TEST_CASE("classify_error follows the severity ordering") {
  const auto& inv = Inventory::builtin();
  const auto outcome = [&](const char* text,
                           std::optional<System> expected = std::nullopt) {
    return parse(text, inv, expected);
  };

  CHECK(classify_error(outcome("BI-RADS 3"), cat(System::kBiRads, "4")) ==
        ErrorDirection::kUndercall);
  CHECK(classify_error(outcome("BI-RADS 5"), cat(System::kBiRads, "4")) ==
        ErrorDirection::kOvercall);
  CHECK(classify_error(outcome("PI-RADS 3"), cat(System::kTiRads, "TR3")) ==
        ErrorDirection::kCrossSystemUndefined);
  CHECK(classify_error(outcome("LI-RADS LR-3"), cat(System::kLiRads, "LR-3")) ==
        ErrorDirection::kExact);
  // Equal rank, different code: plain 4 and 4A sit on the same level.
  CHECK(classify_error(outcome("BI-RADS 4"), cat(System::kBiRads, "4A")) ==
        ErrorDirection::kSafeMisclassify);
  // Unranked code on either side has no direction.
  CHECK(classify_error(outcome("LR-M"), cat(System::kLiRads, "LR-4")) ==
        ErrorDirection::kCrossSystemUndefined);
  CHECK(classify_error(outcome("gibberish"), cat(System::kBiRads, "4")) ==
        ErrorDirection::kCrossSystemUndefined);

  SUBCASE("identity is Exact for every inventory entry") {
    for (const auto& entry : inv.categories()) {
      ParseOutcome self{entry};
      CHECK(classify_error(self, entry) == ErrorDirection::kExact);
    }
  }

  SUBCASE("undercall/overcall are antisymmetric") {
    Rng rng(99);
    const auto& cats = inv.categories();
    int checked = 0;
    while (checked < 200) {
      const auto& a = cats[rng.bounded(cats.size())];
      const auto& b = cats[rng.bounded(cats.size())];
      if (a.system != b.system || !a.rank || !b.rank || a == b) continue;
      ++checked;
      const auto forward = classify_error(ParseOutcome{a}, b);
      const auto backward = classify_error(ParseOutcome{b}, a);
      if (forward == ErrorDirection::kUndercall) {
        CHECK(backward == ErrorDirection::kOvercall);
      } else if (forward == ErrorDirection::kOvercall) {
        CHECK(backward == ErrorDirection::kUndercall);
      } else {
        CHECK(forward == ErrorDirection::kSafeMisclassify);
        CHECK(backward == ErrorDirection::kSafeMisclassify);
      }
    }
  }
}

TEST_CASE("severity_report tallies directions and error shares") {
  const auto& inv = Inventory::builtin();
  std::vector<std::pair<std::string, Category>> pairs = {
      {"BI-RADS 4", cat(System::kBiRads, "4")},        // exact
      {"BI-RADS 3", cat(System::kBiRads, "4")},        // undercall
      {"BI-RADS 5", cat(System::kBiRads, "4")},        // overcall
      {"BI-RADS 4C", cat(System::kBiRads, "4")},       // overcall
      {"BI-RADS 4", cat(System::kBiRads, "4A")},       // safe
      {"PI-RADS 4", cat(System::kBiRads, "4")},        // cross-system
      {"word salad", cat(System::kBiRads, "4")},       // invalid -> undefined
  };
  const auto report = severity_report(pairs, inv);
  CHECK(report.exact == 1);
  CHECK(report.undercall == 1);
  CHECK(report.overcall == 2);
  CHECK(report.safe_misclassify == 1);
  CHECK(report.undefined == 2);
  CHECK(report.total() == pairs.size());
  REQUIRE(report.undercall_ratio.has_value());
  CHECK(*report.undercall_ratio == doctest::Approx(0.25));
  CHECK(*report.overcall_ratio == doctest::Approx(0.5));
  CHECK(*report.safe_ratio == doctest::Approx(0.25));

  SUBCASE("all-correct input leaves the ratios absent") {
    std::vector<std::pair<std::string, Category>> perfect = {
        {"BI-RADS 2", cat(System::kBiRads, "2")},
        {"TI-RADS TR5", cat(System::kTiRads, "TR5")},
    };
    const auto r = severity_report(perfect, inv);
    CHECK(r.exact == 2);
    CHECK_FALSE(r.undercall_ratio.has_value());
  }
}

TEST_CASE("adjacency_profile histograms rank distances") {
  const auto& inv = Inventory::builtin();
  std::vector<std::pair<std::string, Category>> pairs = {
      {"BI-RADS 4", cat(System::kBiRads, "3")},    // distance 1
      {"TI-RADS TR5", cat(System::kTiRads, "TR1")},  // distance 4
      {"BI-RADS 2", cat(System::kBiRads, "2")},    // exact: excluded
      {"PI-RADS 2", cat(System::kTiRads, "TR2")},  // cross-system: excluded
  };
  const auto profile = adjacency_profile(pairs, inv);
  CHECK(profile.total == 2);
  CHECK(profile.histogram.at(1) == 1);
  CHECK(profile.histogram.at(4) == 1);
  CHECK(*profile.adjacent_fraction == doctest::Approx(0.5));

  SUBCASE("no errors, empty histogram") {
    std::vector<std::pair<std::string, Category>> none;
    const auto empty = adjacency_profile(none, inv);
    CHECK(empty.total == 0);
    CHECK(empty.histogram.empty());
    CHECK_FALSE(empty.adjacent_fraction.has_value());
  }
}

TEST_CASE("inventory structure matches the shipped data file") {
  const auto& inv = Inventory::builtin();
  // 10 systems plus LR-TR.
  CHECK(inv.find(System::kBiRads, "0") != nullptr);
  CHECK_FALSE(inv.find(System::kBiRads, "0")->rank.has_value());
  CHECK(inv.find(System::kLiRads, "LR-M") != nullptr);
  CHECK_FALSE(inv.find(System::kLiRads, "LR-M")->rank.has_value());
  CHECK(inv.find(System::kLrTr, "Nonviable")->rank < inv.find(System::kLrTr, "Viable")->rank);
  CHECK(inv.find(System::kNiRads, "2a")->rank < inv.find(System::kNiRads, "2b")->rank);
  CHECK(inv.find(System::kBiRads, "4")->rank == inv.find(System::kBiRads, "4A")->rank);
  CHECK(inv.find(System::kGbRads, "5") != nullptr);
  CHECK(inv.find(System::kCadRads, "0")->rank == 0);

  SUBCASE("from_json rejects malformed inventories") {
    CHECK_THROWS_AS(Inventory::from_json("not json"), DataError);
    CHECK_THROWS_AS(Inventory::from_json(R"({"version":1,"systems":[]})"),
                    DataError);
  }
}
