#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bsmf/pipeline.hpp"

using namespace bsmf;
namespace fs = std::filesystem;

namespace {

SynthSpec small_spec(std::uint64_t seed) {
    SynthSpec s;
    s.k = 3;
    s.users_per_group = 20;
    s.messages_per_user = 8;
    s.vocab_per_corpus = 20;
    s.overlap_mix = 0.35;
    s.seed = seed;
    return s;
}

FitConfig small_fit(std::size_t k, std::uint64_t seed) {
    FitConfig cfg;
    cfg.k = k;
    cfg.max_iters = 200;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("pipeline separates a small synthetic dataset") {
    const auto ds = generate(small_spec(7));
    PipelineOptions opts;
    opts.rbf = {1.5, 0.2};
    const auto result =
        run_pipeline(ds, BeliefMixture::star(3), small_fit(3, 7), opts);
    REQUIRE(result.metrics.has_value());
    CHECK(result.metrics->accuracy >= 0.9);
    CHECK(result.fit.loss_trace.size() == result.fit.iterations_run + 1);
}

TEST_CASE("disabling both modules factorizes the raw incidence matrix") {
    const auto ds = generate(small_spec(3));
    PipelineOptions off;
    off.run_m = false;
    off.run_s = false;
    const auto cfg = small_fit(3, 3);
    const auto via_pipeline = run_pipeline(ds, BeliefMixture::star(3), cfg, off);
    const auto direct = fit(build_x(ds).to_dense(), BeliefMixture::star(3), cfg);
    CHECK(via_pipeline.fit.loss_trace == direct.loss_trace);
}

TEST_CASE("with no social edges the s-module is a no-op") {
    const auto ds = generate(small_spec(4));  // synthetic data has no edges
    PipelineOptions with_s;
    with_s.rbf = {1.5, 0.2};
    PipelineOptions without_s = with_s;
    without_s.run_s = false;
    const auto cfg = small_fit(3, 4);
    const auto a = run_pipeline(ds, BeliefMixture::star(3), cfg, with_s);
    const auto b = run_pipeline(ds, BeliefMixture::star(3), cfg, without_s);
    CHECK(a.fit.loss_trace == b.fit.loss_trace);
}

TEST_CASE("run artifacts land on disk with the effective config embedded") {
    const auto ds = generate(small_spec(5));
    PipelineOptions opts;
    opts.rbf = {1.5, 0.2};
    const auto cfg = small_fit(3, 5);
    const auto result = run_pipeline(ds, BeliefMixture::star(3), cfg, opts);

    const auto dir = fs::temp_directory_path() / "bsmf_artifacts_test";
    fs::remove_all(dir);
    write_run_artifacts(ds, BeliefMixture::star(3), opts, result, dir.string());
    for (const char* name :
         {"u.csv", "m.csv", "b.csv", "assignments.csv", "loss_trace.csv", "run.json",
          "metrics.json"}) {
        CHECK(fs::exists(dir / name));
    }
    const auto u = read_matrix_csv((dir / "u.csv").string());
    CHECK(u.rows() == ds.n_sources());
    CHECK(u.cols() == 3);
    // Matrix csv round-trips bit-exactly.
    CHECK(u.data() == result.fit.factors.u.data());

    std::ifstream run_file(dir / "run.json");
    std::string run_json((std::istreambuf_iterator<char>(run_file)),
                         std::istreambuf_iterator<char>());
    CHECK(run_json.find("\"seed\": 5") != std::string::npos);
    CHECK(run_json.find("\"mode\": \"bsmf\"") != std::string::npos);
    CHECK(run_json.find("\"vocab_per_corpus\": \"20\"") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("benchmark rounds are deterministic and summarized") {
    BenchmarkConfig cfg;
    cfg.rounds = 2;
    cfg.synth = small_spec(11);
    cfg.fit = small_fit(3, 11);
    const auto first = run_benchmark(cfg);
    const auto second = run_benchmark(cfg);
    REQUIRE(first.rounds.size() == 6);  // 2 rounds x 3 modes
    for (std::size_t i = 0; i < first.rounds.size(); ++i) {
        CHECK(first.rounds[i].accuracy == second.rounds[i].accuracy);
        CHECK(first.rounds[i].iterations == second.rounds[i].iterations);
    }
    CHECK(first.summary("bsmf").rounds == 2);
    CHECK(first.summary("nmf").rounds == 2);
    CHECK(first.summary("nmtf").rounds == 2);
    CHECK_THROWS_AS(first.summary("nope"), InputError);

    const auto dir = fs::temp_directory_path() / "bsmf_benchmark_test";
    fs::remove_all(dir);
    write_benchmark_csv(first, dir.string());
    CHECK(fs::exists(dir / "rounds.csv"));
    CHECK(fs::exists(dir / "summary.csv"));
    // Byte-identical reruns for identical seeds.
    write_benchmark_csv(second, (dir / "again").string());
    std::ifstream a(dir / "rounds.csv"), b(dir / "again" / "rounds.csv");
    const std::string ta((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string tb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(ta == tb);
    fs::remove_all(dir);
}

TEST_CASE("single-round benchmark equals the single pipeline run") {
    BenchmarkConfig cfg;
    cfg.rounds = 1;
    cfg.synth = small_spec(13);
    cfg.fit = small_fit(3, 13);
    const auto bench = run_benchmark(cfg);

    SynthSpec synth = cfg.synth;
    synth.seed = cfg.synth.seed;  // round 0
    FitConfig fit_cfg = cfg.fit;
    fit_cfg.mode = FitMode::bsmf;
    const auto solo = run_pipeline(generate(synth), BeliefMixture::star(3), fit_cfg,
                                   cfg.pipeline);
    REQUIRE(solo.metrics.has_value());
    CHECK(bench.summary("bsmf").mean_accuracy == solo.metrics->accuracy);
}

TEST_CASE("ablation benchmark covers the module toggles") {
    BenchmarkConfig cfg;
    cfg.rounds = 1;
    cfg.ablation = true;
    cfg.synth = small_spec(17);
    cfg.fit = small_fit(3, 17);
    const auto bench = run_benchmark(cfg);
    REQUIRE(bench.summaries.size() == 4);
    CHECK(bench.summary("bsmf").rounds == 1);
    CHECK(bench.summary("bsmf-s").rounds == 1);
    CHECK(bench.summary("bsmf-m").rounds == 1);
    CHECK(bench.summary("bsmf-ms").rounds == 1);
    // No social edges: disabling S changes nothing, so bsmf == bsmf-s.
    CHECK(bench.summary("bsmf").mean_accuracy ==
          doctest::Approx(bench.summary("bsmf-s").mean_accuracy));
}
