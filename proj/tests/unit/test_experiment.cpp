#include <filesystem>
#include <fstream>
#include <sstream>

#include "corrlab/corrlab.hpp"
#include "doctest.h"

using namespace corrlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("corrlab_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    return p;
}

ExperimentConfig quick_measure() {
    auto c = default_config(ExperimentKind::measure_dominance);
    c.params.scan_max_sites = 2000;
    return c;
}

}  // namespace

TEST_CASE("config parsing is strict") {
    CHECK_THROWS_AS(config_from_json("{\"kind\": \"alpha_scaling\", \"lattice\": {\"sitez\": 3}}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"kind\": \"alpha_scaling\", \"lattice\": {\"sites\": 3.5}}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"kind\": \"alpha_scaling\", \"lattice\": {\"sites\": \"3\"}}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"kind\": \"warp_drive\"}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"lattice\": {}}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"kind\": \"born_rule\", \"lattice\": {\"spacing\": -1}}"), ConfigError);
    auto c = config_from_json("{\"kind\": \"alpha_scaling\", \"engine\": {\"seed\": 7}}");
    CHECK(c.kind == ExperimentKind::alpha_scaling);
    CHECK(c.engine.seed == 7);
    CHECK(c.lattice.sites == default_config(ExperimentKind::alpha_scaling).lattice.sites);
}

TEST_CASE("config round trip and hash") {
    for (auto k : all_experiment_kinds()) {
        auto c = default_config(k);
        auto back = config_from_json(config_to_json(c));
        CHECK(config_to_json(back) == config_to_json(c));
        CHECK(config_hash(back) == config_hash(c));
    }
    auto a = default_config(ExperimentKind::time_symmetry);
    auto b = a;
    b.output = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.engine.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("format_double keeps 17 significant digits") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    Series s{"x", {"a", "b"}, {{1.0, 0.1}}};
    CHECK(series_csv(s) == "a,b\n1,0.10000000000000001\n");
}

TEST_CASE("same config gives byte-identical records") {
    auto c = quick_measure();
    auto o1 = run_experiment(c);
    auto o2 = run_experiment(c);
    CHECK(summary_json(o1.record) == summary_json(o2.record));
    CHECK(o1.record.all_passed());
    CHECK(o1.manifest.config_hash == config_hash(c));

    auto d1 = scratch("det1"), d2 = scratch("det2");
    write_run(d1, c, o1.record, o1.manifest);
    write_run(d2, c, o2.record, o2.manifest);
    for (const auto& e : fs::directory_iterator(d1)) {
        auto name = e.path().filename();
        if (name == "manifest.json") continue;  // timestamps
        CHECK(slurp(e.path()) == slurp(d2 / name));
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("write_run is atomic and complete") {
    auto c = quick_measure();
    auto o = run_experiment(c);
    auto d = scratch("atomic");
    write_run(d, c, o.record, o.manifest);
    CHECK(fs::exists(d / "config.json"));
    CHECK(fs::exists(d / "summary.json"));
    CHECK(fs::exists(d / "manifest.json"));
    CHECK(fs::exists(d / "series_measure_gap.csv"));
    CHECK(config_from_json(slurp(d / "config.json")).kind == c.kind);
    auto csv = slurp(d / "series_measure_gap.csv");
    CHECK(csv.rfind("B2,", 0) == 0);
    // overwrite leaves no staging directory behind
    write_run(d, c, o.record, o.manifest);
    for (const auto& e : fs::directory_iterator(d.parent_path()))
        CHECK(e.path().filename().string().find(".corrlab_test_atomic") == std::string::npos);
    auto l = load_record(d);
    CHECK(l.integrity_ok);
    CHECK(l.record.kind == ExperimentKind::measure_dominance);
    CHECK(summary_json(l.record) == summary_json(o.record));
    fs::remove_all(d);
}

TEST_CASE("budget refusal writes nothing") {
    auto c = default_config(ExperimentKind::born_rule);
    c.engine.budget = 1000;
    auto d = scratch("budget");
    CHECK_THROWS_AS(run_and_write(c, d), BudgetExceeded);
    CHECK_FALSE(fs::exists(d));
}

TEST_CASE("tampering is detected") {
    auto c = quick_measure();
    auto o = run_experiment(c);
    auto d = scratch("tamper");
    write_run(d, c, o.record, o.manifest);
    auto text = slurp(d / "summary.json");
    auto pos = text.find("\"measured\": ");
    REQUIRE(pos != std::string::npos);
    text.insert(pos + 12, "9");
    std::ofstream(d / "summary.json") << text;
    auto l = load_record(d);
    CHECK_FALSE(l.integrity_ok);
    CHECK(l.problem.find("checksum") != std::string::npos);
    auto rows = verify_claims({l});
    for (const auto& r : rows)
        if (r.experiment == "measure_dominance") CHECK(r.status == ClaimStatus::integrity_error);

    // series file edit
    write_run(d, c, o.record, o.manifest);
    std::ofstream(d / "series_measure_gap.csv", std::ios::app) << "1,2,3,4,5,6,7\n";
    CHECK_FALSE(load_record(d).integrity_ok);
    fs::remove_all(d);
}

TEST_CASE("missing experiments are not run, never inferred") {
    auto c = quick_measure();
    auto o = run_experiment(c);
    auto d = scratch("notrun");
    write_run(d, c, o.record, o.manifest);
    auto rows = verify_claims({load_record(d)});
    CHECK(rows.size() == 9);
    int not_run = 0;
    for (const auto& r : rows) {
        if (r.experiment == "measure_dominance")
            CHECK(r.status == ClaimStatus::pass);
        else
            CHECK(r.status == ClaimStatus::not_run);
        not_run += r.status == ClaimStatus::not_run;
    }
    CHECK(not_run == 8);
    CHECK(verify_claims({}).size() == 9);
    // pure function
    CHECK(claim_matrix_text(rows) == claim_matrix_text(verify_claims({load_record(d)})));
    fs::remove_all(d);
}

TEST_CASE("born_rule_setup") {
    LatticeSpec base;
    base.sites = 4;
    base.prob_quantum = 16;
    base.dt = 0.1;
    SUBCASE("certainty is a single trivial branch") {
        auto b = born_rule_setup({1.0}, 2, 5.0, base);
        CHECK(b.trivial);
        CHECK(b.branches.size() == 1);
        CHECK(b.lattice.sites == 2);
    }
    SUBCASE("two branches") {
        auto b = born_rule_setup({0.8, 0.2}, 2, 5.0, base);
        CHECK_FALSE(b.trivial);
        REQUIRE(b.branches.size() == 2);
        CHECK(b.lattice.sites == 4);
        CHECK(b.initial.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(b.initial.probability(0) + b.initial.probability(1) == doctest::Approx(0.8 / base.spacing));
        LatticeHamiltonian h(b.hamiltonian, b.lattice);
        for (const auto& br : b.branches) {
            CHECK(br.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
            // spanned by the two lowest eigenstates: stationary up to mixing
            auto e = expectations(br, h);
            auto sp = spectrum(h);
            CHECK(e.energy <= sp.energies[1] + 1e-12);
        }
        // branch k sits mostly on particle site k
        CHECK(b.branches[0].probability(0) + b.branches[0].probability(1) > 0.5);
        CHECK(b.branches[1].probability(2) + b.branches[1].probability(3) > 0.5);
    }
    SUBCASE("equal probabilities give mirror branches") {
        auto b = born_rule_setup({0.5, 0.5}, 2, 5.0, base);
        // swapping particle and pointer sites together maps branch 0 onto branch 1
        for (int n = 0; n < 4; ++n)
            CHECK(b.branches[0].probability(n) == doctest::Approx(b.branches[1].probability(3 - n)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(born_rule_setup({0.97, 0.03}, 2, 5.0, base), ConfigError);
    CHECK_THROWS_AS(born_rule_setup({0.5, 0.4}, 2, 5.0, base), ConfigError);
    CHECK_THROWS_AS(born_rule_setup({}, 2, 5.0, base), ConfigError);
}

TEST_CASE("localized pair sits in opposite wells") {
    auto c = default_config(ExperimentKind::nonlinearity);
    LatticeHamiltonian h(c.hamiltonian, c.lattice);
    auto [A, B] = localized_pair(h);
    const int M = c.lattice.sites;
    double leftA = 0, leftB = 0;
    for (int n = 0; n < M / 2; ++n) {
        leftA += A.probability(n) * c.lattice.spacing;
        leftB += B.probability(n) * c.lattice.spacing;
    }
    CHECK(leftA > 0.7);
    CHECK(leftB < 0.3);
}

TEST_CASE("single-branch born run is flagged, not checked") {
    auto c = default_config(ExperimentKind::born_rule);
    c.params.particle_probs = {1.0};
    auto o = run_experiment(c);
    CHECK(o.record.checks.empty());
    CHECK_FALSE(o.record.warnings.empty());
}
