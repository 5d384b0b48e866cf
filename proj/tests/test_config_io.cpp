#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "cnsf/run_record.hpp"
#include "test_helpers.hpp"

using namespace cnsf;

TEST_CASE("sha256 standard vectors") {
    CHECK(Sha256::of(std::string{}) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(Sha256::of(std::string{"abc"}) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(Sha256::of(std::string{"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"}) ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // Multi-block message.
    std::string a(1000, 'a');
    Sha256 s;
    for (int i = 0; i < 1000; ++i) s.update(a.data(), a.size());
    CHECK(s.hex_digest() ==
          "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("snapshot encode/decode round trip preserves everything") {
    GridSpec g = make_grid(8, 1.7);
    SpectralVectorField u = test::random_divfree_field(g, 3, 0.7);
    std::string bytes = encode_snapshot(u, 0.25, -4.5);
    CHECK(bytes.compare(0, 4, "CNSF") == 0);
    CHECK(bytes.size() == 41 + 48 * g.size()); // 4+4+8+3*8+1 header bytes

    SnapshotHeader hdr;
    SpectralVectorField v = decode_snapshot(bytes, &hdr);
    CHECK(hdr.time == 0.25);
    CHECK(hdr.omega == -4.5);
    CHECK(v.grid == g);
    CHECK(v.divergence_free);
    CHECK(test::max_coeff_diff(u, v) == 0.0);

    // Corrupt magic rejected; truncation rejected.
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(decode_snapshot(bad), std::runtime_error);
    CHECK_THROWS_AS(decode_snapshot(bytes.substr(0, 100)), std::runtime_error);
}

TEST_CASE("config parsing: defaults, errors aggregated, duplicates cited") {
    ExperimentConfig cfg = parse_config_text("# only comments\n");
    CHECK(cfg.grid_n == 32);
    CHECK(cfg.scheme == "etd2rk");

    // The documented default text parses to the defaults.
    ExperimentConfig dflt = parse_config_text(default_config_text());
    CHECK(dflt.omega == 10.0);
    CHECK(dflt.norms.size() == 2);

    ExperimentConfig over = parse_config_text("grid.n = 64\nnorms.schedule = 0:inf 1:2\n");
    CHECK(over.grid_n == 64);
    CHECK(std::isinf(over.norms[0].second));

    // Not a power of two: error naming the rule.
    try {
        parse_config_text("grid.n = 12\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        bool names_rule = false;
        for (const auto& p : e.problems)
            if (p.find("power of two") != std::string::npos) names_rule = true;
        CHECK(names_rule);
    }

    // Duplicate key cites both line numbers.
    try {
        parse_config_text("time.dt = 0.1\nphysics.omega = 1\ntime.dt = 0.2\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        REQUIRE(e.problems.size() == 1);
        CHECK(e.problems[0].find("lines 1 and 3") != std::string::npos);
    }

    // Unknown key is an error, not a warning.
    CHECK_THROWS_AS(parse_config_text("grid.m = 16\n"), ConfigError);

    // Every violation reported, not just the first.
    try {
        parse_config_text("grid.n = 12\ntime.dt = -1\nexperiment.p = 0.5\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems.size() >= 3);
    }

    // Type mismatch named with its line.
    try {
        parse_config_text("time.dt = fast\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.problems[0].find("malformed") != std::string::npos);
    }
}

TEST_CASE("csv emission is deterministic and digests match the files") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "cnsf_io_test";
    fs::remove_all(dir);

    GridSpec g = make_grid(8, 1.0);
    InitialDataSpec spec;
    spec.seed = 4;
    spec.amplitude = 0.3;
    SpectralVectorField u0 = generate_initial_data(spec, g);
    IntegratorConfig icfg;
    icfg.dt = 0.01;
    icfg.t_end = 0.05;
    icfg.snapshot_stride = 2;
    icfg.norm_schedule = {{0.0, 2.0}};

    ExperimentConfig cfg;
    cfg.grid_n = 8;
    cfg.box_length = 1.0;
    cfg.output_dir = (dir / "a").string();

    auto run_once = [&](const std::string& sub, int threads) {
        set_thread_hint(threads);
        RunRecord rec = simulate(u0, 3.0, icfg);
        RunWriter w((dir / sub).string());
        emit_run_record(w, rec, cfg, std::nullopt);
        set_thread_hint(1);
        return w.digests();
    };
    auto d1 = run_once("a", 1);
    auto d4 = run_once("b", 4);
    REQUIRE(d1.size() == d4.size());
    for (const auto& [name, sha] : d1) {
        INFO(name);
        CHECK(d4.at(name) == sha);
    }

    // Digests recorded in the manifest match the bytes on disk.
    std::ifstream mf(dir / "a" / "manifest.json");
    nlohmann::json manifest = nlohmann::json::parse(mf);
    for (const auto& [name, sha] : manifest["digests"].items()) {
        std::ifstream f(dir / "a" / name, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(f)),
                          std::istreambuf_iterator<char>());
        CHECK(Sha256::of(bytes) == sha.get<std::string>());
    }

    // Empty norm schedule: header-only norms.csv.
    RunWriter w2((dir / "c").string());
    w2.write_csv("norms.csv", {"t", "m", "p", "value"}, {});
    std::ifstream nf(dir / "c" / "norms.csv");
    std::string content((std::istreambuf_iterator<char>(nf)),
                        std::istreambuf_iterator<char>());
    CHECK(content == "t,m,p,value\n");

    fs::remove_all(dir);
}

TEST_CASE("full float precision in csv output") {
    CHECK(format_g17(1.0 / 3.0) == "0.33333333333333331");
    CHECK(std::stod(format_g17(pi)) == pi);
}
