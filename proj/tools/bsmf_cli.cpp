// bsmf: belief separation pipeline over source-claim endorsement data.
// Subcommands: synth, ingest, fit, eval, benchmark, report.
// Exit codes: 0 success, 2 input error, 3 optimizer divergence.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsmf/pipeline.hpp"

namespace fs = std::filesystem;
using namespace bsmf;

namespace {

BeliefMixture parse_belief(const std::string& text) {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const std::string arg = text.substr(colon + 1);
        if (kind == "star") return BeliefMixture::star(std::stoul(arg));
        if (kind == "identity") return BeliefMixture::identity(std::stoul(arg));
        if (kind == "file") return BeliefMixture::from_json_file(arg);
    }
    throw InputError("--belief expects star:K, identity:K, or file:PATH, got \"" + text + "\"");
}

void apply_eta(FitConfig& cfg, const std::string& eta) {
    if (eta == "mult") {
        cfg.step_rule = StepRule::multiplicative;
        return;
    }
    cfg.step_rule = StepRule::constant;
    try {
        std::size_t used = 0;
        cfg.eta = std::stod(eta, &used);
        if (used != eta.size()) throw std::invalid_argument(eta);
    } catch (const std::exception&) {
        throw InputError("--eta expects a positive float or \"mult\", got \"" + eta + "\"");
    }
}

struct DataFlags {
    std::string data_dir;
    std::string incidences, claims, edges, labels;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--data", data_dir,
                        "Dataset directory (claims.jsonl, incidences.csv, edges.csv, "
                        "labels.csv)");
        cmd->add_option("--incidences", incidences, "Incidence CSV: source_id,claim_id");
        cmd->add_option("--claims", claims, "Claims JSONL: {\"claim_id\", \"text\"}");
        cmd->add_option("--edges", edges, "Retweet edges CSV: retweeter_id,author_id,count");
        cmd->add_option("--labels", labels, "Ground-truth labels CSV: claim_id,region");
    }

    Dataset load() const {
        if (!data_dir.empty()) return ingest_dir(data_dir);
        if (incidences.empty() || claims.empty()) {
            throw InputError("need --data DIR or both --incidences and --claims");
        }
        IngestPaths paths;
        paths.incidences = incidences;
        paths.claims = claims;
        paths.edges = edges;
        paths.labels = labels;
        return ingest(paths);
    }
};

void print_metrics_table(const MetricsReport& m, const std::string& model) {
    std::printf("%-10s | %9s %9s %9s | %9s %9s %9s | %s\n", "model", "macro P", "macro R",
                "macro F", "wtd P", "wtd R", "wtd F", "accuracy");
    std::printf("%-10s | %9.3f %9.3f %9.3f | %9.3f %9.3f %9.3f | %.3f\n", model.c_str(),
                m.macro_precision, m.macro_recall, m.macro_f1, m.weighted_precision,
                m.weighted_recall, m.weighted_f1, m.accuracy);
    std::printf("scored %zu of %zu claims (%.1f%% coverage)\n", m.n_scored, m.n_total,
                m.n_total > 0 ? 100.0 * double(m.n_scored) / double(m.n_total) : 0.0);
}

int run_cli(int argc, char** argv) {
    CLI::App app{"belief separation by structured matrix factorization"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
    SynthSpec spec;
    std::string synth_out;
    synth->add_option("--out", synth_out, "Output dataset directory")->required();
    synth->add_option("--k", spec.k, "Belief regions including the overlap");
    synth->add_option("--users-per-group", spec.users_per_group);
    synth->add_option("--messages-per-user", spec.messages_per_user);
    synth->add_option("--vocab", spec.vocab_per_corpus, "Words per belief corpus");
    synth->add_option("--min-tokens", spec.min_tokens);
    synth->add_option("--max-tokens", spec.max_tokens);
    synth->add_option("--overlap-mix", spec.overlap_mix,
                      "Probability a b-group token comes from the overlap corpus");
    synth->add_option("--seed", spec.seed);

    // ---- ingest ----
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate and normalize dataset files");
    DataFlags ingest_flags;
    ingest_flags.add_to(ingest_cmd);
    std::string ingest_out;
    ingest_cmd->add_option("--out", ingest_out, "Normalized dataset directory")->required();

    // ---- shared fit options ----
    struct FitFlags {
        std::string belief = "star:4";
        std::string mode = "bsmf";
        bool no_m = false, no_s = false, symmetrize = false;
        double lambda1 = 0.1, lambda2 = 0.0;
        std::string eta = "mult";
        double eps_clip = 1e-8, tol = 1e-6, eps_rbf = 1.5, cutoff = 0.2;
        std::size_t max_iters = 300;
        std::uint64_t seed = 0;

        void add_to(CLI::App* cmd) {
            cmd->add_option("--belief", belief, "star:K | identity:K | file:PATH");
            cmd->add_option("--mode", mode)->check(CLI::IsMember({"bsmf", "nmf", "nmtf"}));
            cmd->add_flag("--no-m", no_m, "Skip similarity interpolation (BSMF-M variant)");
            cmd->add_flag("--no-s", no_s, "Skip social-graph smoothing (BSMF-S variant)");
            cmd->add_flag("--symmetrize-graph", symmetrize,
                          "Symmetrize the retweet graph before normalization");
            cmd->add_option("--lambda1", lambda1, "L2 regularization weight");
            cmd->add_option("--lambda2", lambda2, "L1 regularization weight");
            cmd->add_option("--eta", eta, "Step size: positive float or \"mult\"");
            cmd->add_option("--eps-clip", eps_clip, "Positivity floor for factor entries");
            cmd->add_option("--max-iters", max_iters);
            cmd->add_option("--tol", tol, "Relative loss-change convergence threshold");
            cmd->add_option("--eps-rbf", eps_rbf, "Gaussian radius width for similarity");
            cmd->add_option("--cutoff", cutoff, "Interpolated values below this become 0");
            cmd->add_option("--seed", seed);
        }

        BeliefMixture belief_mixture() const { return parse_belief(belief); }

        FitConfig fit_config(std::size_t k) const {
            FitConfig cfg;
            cfg.k = k;
            cfg.mode = fit_mode_from_string(mode);
            cfg.lambda1 = lambda1;
            cfg.lambda2 = lambda2;
            apply_eta(cfg, eta);
            cfg.eps_clip = eps_clip;
            cfg.max_iters = max_iters;
            cfg.tol = tol;
            cfg.seed = seed;
            return cfg;
        }

        PipelineOptions pipeline_options() const {
            PipelineOptions opts;
            opts.run_m = !no_m;
            opts.run_s = !no_s;
            opts.symmetrize_graph = symmetrize;
            opts.rbf = {eps_rbf, cutoff};
            return opts;
        }
    };

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "Run the factorization pipeline");
    DataFlags fit_data;
    fit_data.add_to(fit_cmd);
    FitFlags fit_flags;
    fit_flags.add_to(fit_cmd);
    std::string fit_out;
    fit_cmd->add_option("--out", fit_out, "Run artifact directory")->required();

    // ---- eval ----
    auto* eval_cmd = app.add_subcommand("eval", "Score a run against ground-truth labels");
    DataFlags eval_data;
    eval_data.add_to(eval_cmd);
    std::string eval_run;
    std::size_t eval_top_k = 0;
    bool pin_overlap = false;
    eval_cmd->add_option("--run", eval_run, "Run artifact directory from fit")->required();
    eval_cmd->add_option("--top-k", eval_top_k,
                         "Score only the top-k claims per predicted region");
    eval_cmd->add_flag("--pin-overlap", pin_overlap,
                       "Keep predicted region 0 mapped to truth region 0 when aligning");

    // ---- benchmark ----
    auto* bench_cmd = app.add_subcommand(
        "benchmark", "Run bsmf/nmf/nmtf (or module ablations) over synthetic rounds");
    SynthSpec bench_spec;
    FitFlags bench_flags;
    bench_flags.max_iters = 200;
    std::string bench_out;
    std::size_t bench_rounds = 200;
    bool bench_ablation = false;
    bench_cmd->add_option("--out", bench_out, "Output directory for CSV summaries")->required();
    bench_cmd->add_option("--rounds", bench_rounds);
    bench_cmd->add_flag("--ablation", bench_ablation,
                        "Benchmark bsmf/bsmf-s/bsmf-m/bsmf-ms instead of the three modes");
    bench_cmd->add_option("--k", bench_spec.k);
    bench_cmd->add_option("--users-per-group", bench_spec.users_per_group);
    bench_cmd->add_option("--messages-per-user", bench_spec.messages_per_user);
    bench_cmd->add_option("--vocab", bench_spec.vocab_per_corpus);
    bench_cmd->add_option("--min-tokens", bench_spec.min_tokens);
    bench_cmd->add_option("--max-tokens", bench_spec.max_tokens);
    bench_cmd->add_option("--overlap-mix", bench_spec.overlap_mix);
    bench_flags.add_to(bench_cmd);

    // ---- report ----
    auto* report_cmd = app.add_subcommand("report", "Render metrics and top claims for a run");
    DataFlags report_data;
    report_data.add_to(report_cmd);
    std::string report_run;
    std::size_t report_top_k = 10;
    report_cmd->add_option("--run", report_run, "Run artifact directory")->required();
    report_cmd->add_option("--top-k", report_top_k, "Claims to list per region");

    CLI11_PARSE(app, argc, argv);

    if (synth->parsed()) {
        const auto ds = generate(spec);
        write_dataset(ds, synth_out);
        std::printf("wrote %zu sources, %zu claims to %s\n", ds.n_sources(), ds.n_claims(),
                    synth_out.c_str());
        return 0;
    }

    if (ingest_cmd->parsed()) {
        const auto ds = ingest_flags.load();
        write_dataset(ds, ingest_out);
        std::printf("ingested %zu sources, %zu claims, %zu incidences, %zu edges (%zu labeled "
                    "claims) into %s\n",
                    ds.n_sources(), ds.n_claims(), ds.incidences.size(), ds.social_edges.size(),
                    ds.n_labeled(), ingest_out.c_str());
        return 0;
    }

    if (fit_cmd->parsed()) {
        const auto ds = fit_data.load();
        const auto belief = fit_flags.belief_mixture();
        const auto cfg = fit_flags.fit_config(belief.k());
        const auto opts = fit_flags.pipeline_options();
        const auto result = run_pipeline(ds, belief, cfg, opts);
        write_run_artifacts(ds, belief, opts, result, fit_out);
        std::printf("fit %s: %zu iterations, converged=%s, final loss %.6g\n",
                    to_string(cfg.mode).c_str(), result.fit.iterations_run,
                    result.fit.converged ? "true" : "false", result.fit.loss_trace.back());
        if (result.metrics) {
            std::printf("accuracy %.3f (alignment over %zu labeled claims)\n",
                        result.metrics->accuracy, result.metrics->n_scored);
        }
        std::printf("artifacts in %s\n", fit_out.c_str());
        return 0;
    }

    if (eval_cmd->parsed()) {
        const auto ds = eval_data.load();
        if (!ds.has_labels()) throw InputError("eval: dataset has no ground-truth labels");
        const auto m = read_matrix_csv((fs::path(eval_run) / "m.csv").string());
        if (m.rows() != ds.n_claims()) {
            throw InputError("eval: m.csv has " + std::to_string(m.rows()) +
                             " rows but the dataset has " + std::to_string(ds.n_claims()) +
                             " claims");
        }
        FactorPair factors;
        factors.m = m;
        factors.u = DenseMatrix(0, m.cols());
        std::vector<int> truth = ds.labels;
        if (eval_top_k > 0) {
            // Score only the strongest predictions per region; everything
            // else counts as unlabeled coverage.
            std::vector<int> masked(truth.size(), -1);
            for (std::size_t region = 0; region < m.cols(); ++region) {
                for (std::size_t j : top_k_claims(factors, region, eval_top_k)) {
                    masked[j] = truth[j];
                }
            }
            truth = std::move(masked);
        }
        const auto pred = assign(factors).claim_region;
        const auto report = evaluate_labels(pred, truth, m.cols(), pin_overlap);
        {
            std::ofstream out(fs::path(eval_run) / "metrics.json");
            out << report.to_json_string() << "\n";
        }
        print_metrics_table(report, "run");
        return 0;
    }

    if (bench_cmd->parsed()) {
        BenchmarkConfig cfg;
        cfg.rounds = bench_rounds;
        cfg.ablation = bench_ablation;
        cfg.synth = bench_spec;
        cfg.synth.seed = bench_flags.seed;
        cfg.fit = bench_flags.fit_config(bench_spec.k);
        cfg.pipeline = bench_flags.pipeline_options();
        const auto result = run_benchmark(cfg);
        write_benchmark_csv(result, bench_out);
        std::printf("%-8s %8s %8s %10s %8s\n", "variant", "mean", "stddev", "converged",
                    "iters");
        for (const auto& s : result.summaries) {
            std::printf("%-8s %8.4f %8.4f %9.1f%% %8.1f\n", s.variant.c_str(),
                        s.mean_accuracy, s.stddev_accuracy, 100.0 * s.converged_rate,
                        s.mean_iterations);
        }
        std::printf("summaries in %s\n", bench_out.c_str());
        return 0;
    }

    if (report_cmd->parsed()) {
        const auto metrics_path = fs::path(report_run) / "metrics.json";
        if (fs::exists(metrics_path)) {
            std::ifstream in(metrics_path);
            nlohmann::json j;
            in >> j;
            MetricsReport m;
            m.accuracy = j["accuracy"];
            m.macro_precision = j["macro"]["precision"];
            m.macro_recall = j["macro"]["recall"];
            m.macro_f1 = j["macro"]["f1"];
            m.weighted_precision = j["weighted"]["precision"];
            m.weighted_recall = j["weighted"]["recall"];
            m.weighted_f1 = j["weighted"]["f1"];
            m.n_scored = j["scored_claims"];
            m.n_total = j["total_claims"];
            print_metrics_table(m, "run");
        } else {
            std::printf("no metrics.json in %s (run eval first); listing top claims only\n",
                        report_run.c_str());
        }
        const auto ds = report_data.load();
        const auto m = read_matrix_csv((fs::path(report_run) / "m.csv").string());
        if (m.rows() != ds.n_claims()) {
            throw InputError("report: m.csv does not match the dataset");
        }
        FactorPair factors;
        factors.m = m;
        factors.u = DenseMatrix(0, m.cols());
        for (std::size_t region = 0; region < m.cols(); ++region) {
            std::printf("\ntop %zu claims for region %zu:\n", report_top_k, region);
            for (std::size_t j : top_k_claims(factors, region, report_top_k)) {
                std::printf("  %.4f  %s  %s\n", m(j, region), ds.claim_ids[j].c_str(),
                            ds.claim_texts[j].c_str());
            }
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const DivergenceError& e) {
        nlohmann::json err;
        err["error"] = {{"kind", "divergence"},
                        {"message", e.what()},
                        {"iteration", e.iteration()}};
        std::cerr << err.dump() << "\n";
        return 3;
    } catch (const InputError& e) {
        nlohmann::json err;
        err["error"] = {{"kind", "input"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = {{"kind", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}
