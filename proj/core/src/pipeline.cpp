#include "bsmf/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "bsmf/graph.hpp"

namespace bsmf {

namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json config_json(const FitConfig& cfg) {
    nlohmann::json j;
    j["k"] = cfg.k;
    j["mode"] = to_string(cfg.mode);
    j["lambda1"] = cfg.lambda1;
    j["lambda2"] = cfg.lambda2;
    j["eta"] = cfg.step_rule == StepRule::multiplicative ? nlohmann::json("mult")
                                                         : nlohmann::json(cfg.eta);
    j["eps_clip"] = cfg.eps_clip;
    j["max_iters"] = cfg.max_iters;
    j["tol"] = cfg.tol;
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace

PipelineResult run_pipeline(const Dataset& ds, const BeliefMixture& belief, const FitConfig& cfg,
                            const PipelineOptions& opts) {
    const SparseMatrix x = build_x(ds);
    SparseMatrix xm = x;
    if (opts.run_m) {
        Vocabulary vocab;
        const auto bows = build_bows(ds, vocab);
        xm = interpolate(x, bows, opts.rbf);
    }
    DenseMatrix xms;
    if (opts.run_s) {
        const auto op = PropagationOperator::build(build_graph(ds, opts.symmetrize_graph));
        xms = convolve(op, xm);
    } else {
        xms = xm.to_dense();
    }

    PipelineResult result;
    result.fit = fit(xms, belief, cfg);
    result.assignment = assign(result.fit.factors);
    if (ds.has_labels()) {
        result.metrics = evaluate_labels(result.assignment.claim_region, ds.labels, cfg.k);
    }
    return result;
}

void write_matrix_csv(const DenseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ",";
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

DenseMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::vector<double> values;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t row_cols = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t next = std::min(line.find(',', pos), line.size());
            values.push_back(std::stod(line.substr(pos, next - pos)));
            ++row_cols;
            pos = next + 1;
        }
        if (rows == 0) {
            cols = row_cols;
        } else if (row_cols != cols) {
            throw InputError(path + ": ragged rows");
        }
        ++rows;
    }
    return DenseMatrix(rows, cols, std::move(values));
}

void write_run_artifacts(const Dataset& ds, const BeliefMixture& belief,
                         const PipelineOptions& opts, const PipelineResult& result,
                         const std::string& dir) {
    fs::create_directories(dir);
    write_matrix_csv(result.fit.factors.u, (fs::path(dir) / "u.csv").string());
    write_matrix_csv(result.fit.factors.m, (fs::path(dir) / "m.csv").string());
    const DenseMatrix b_out = result.fit.factors.b_tilde
                                  ? *result.fit.factors.b_tilde
                                  : (result.fit.config.mode == FitMode::nmf
                                         ? DenseMatrix::identity(result.fit.config.k)
                                         : belief.dense());
    write_matrix_csv(b_out, (fs::path(dir) / "b.csv").string());

    {
        std::ofstream out(fs::path(dir) / "assignments.csv");
        out << "claim_id,region,score\n";
        for (std::size_t j = 0; j < ds.n_claims(); ++j) {
            out << ds.claim_ids[j] << "," << result.assignment.claim_region[j] << ","
                << format_double(result.assignment.claim_score[j]) << "\n";
        }
    }
    {
        std::ofstream out(fs::path(dir) / "loss_trace.csv");
        out << "iteration,loss\n";
        for (std::size_t t = 0; t < result.fit.loss_trace.size(); ++t) {
            out << t << "," << format_double(result.fit.loss_trace[t]) << "\n";
        }
    }
    {
        nlohmann::json run;
        run["fit_config"] = config_json(result.fit.config);
        run["belief"] = nlohmann::json::parse(belief.to_json_string());
        run["modules"] = {{"m", opts.run_m}, {"s", opts.run_s}};
        run["rbf"] = {{"epsilon", opts.rbf.epsilon}, {"cutoff", opts.rbf.cutoff}};
        run["symmetrize_graph"] = opts.symmetrize_graph;
        run["iterations_run"] = result.fit.iterations_run;
        run["converged"] = result.fit.converged;
        run["final_loss"] = result.fit.loss_trace.back();
        run["dataset"] = nlohmann::json(ds.metadata);
        run["n_sources"] = ds.n_sources();
        run["n_claims"] = ds.n_claims();
        std::ofstream out(fs::path(dir) / "run.json");
        out << run.dump(2) << "\n";
    }
    if (result.metrics) {
        std::ofstream out(fs::path(dir) / "metrics.json");
        out << result.metrics->to_json_string() << "\n";
    }
}

const VariantSummary& BenchmarkResult::summary(const std::string& variant) const {
    for (const auto& s : summaries) {
        if (s.variant == variant) return s;
    }
    throw InputError("benchmark: no summary for variant \"" + variant + "\"");
}

BenchmarkResult run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.rounds < 1) throw InputError("benchmark: rounds must be >= 1");

    struct Variant {
        std::string name;
        FitMode mode;
        bool run_m;
        bool run_s;
    };
    std::vector<Variant> variants;
    if (cfg.ablation) {
        variants = {{"bsmf", FitMode::bsmf, true, true},
                    {"bsmf-s", FitMode::bsmf, true, false},
                    {"bsmf-m", FitMode::bsmf, false, true},
                    {"bsmf-ms", FitMode::bsmf, false, false}};
    } else {
        variants = {{"bsmf", FitMode::bsmf, true, true},
                    {"nmf", FitMode::nmf, true, true},
                    {"nmtf", FitMode::nmtf, true, true}};
    }

    BenchmarkResult result;
    const BeliefMixture belief = BeliefMixture::star(cfg.synth.k);
    for (std::size_t round = 0; round < cfg.rounds; ++round) {
        SynthSpec synth = cfg.synth;
        synth.seed = cfg.synth.seed + round;
        const Dataset ds = generate(synth);

        for (const auto& variant : variants) {
            FitConfig fit_cfg = cfg.fit;
            fit_cfg.k = cfg.synth.k;
            fit_cfg.mode = variant.mode;
            fit_cfg.seed = cfg.fit.seed + round;
            PipelineOptions opts = cfg.pipeline;
            opts.run_m = variant.run_m && cfg.pipeline.run_m;
            opts.run_s = variant.run_s && cfg.pipeline.run_s;

            const PipelineResult run = run_pipeline(ds, belief, fit_cfg, opts);
            RoundRecord record;
            record.round = round;
            record.variant = variant.name;
            record.seed = fit_cfg.seed;
            record.accuracy = run.metrics ? run.metrics->accuracy : 0.0;
            record.iterations = run.fit.iterations_run;
            record.converged = run.fit.converged;
            record.final_loss = run.fit.loss_trace.back();
            result.rounds.push_back(record);
        }
    }

    for (const auto& variant : variants) {
        VariantSummary s;
        s.variant = variant.name;
        double sum = 0.0, sum_sq = 0.0, iter_sum = 0.0;
        std::size_t converged = 0;
        for (const auto& r : result.rounds) {
            if (r.variant != variant.name) continue;
            ++s.rounds;
            sum += r.accuracy;
            sum_sq += r.accuracy * r.accuracy;
            iter_sum += static_cast<double>(r.iterations);
            if (r.converged) ++converged;
        }
        const double n = static_cast<double>(s.rounds);
        s.mean_accuracy = sum / n;
        const double var = std::max(sum_sq / n - s.mean_accuracy * s.mean_accuracy, 0.0);
        s.stddev_accuracy = std::sqrt(var);
        s.converged_rate = static_cast<double>(converged) / n;
        s.mean_iterations = iter_sum / n;
        result.summaries.push_back(s);
    }
    return result;
}

void write_benchmark_csv(const BenchmarkResult& result, const std::string& dir) {
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "rounds.csv");
        out << "round,variant,seed,accuracy,iterations,converged,final_loss\n";
        for (const auto& r : result.rounds) {
            out << r.round << "," << r.variant << "," << r.seed << ","
                << format_double(r.accuracy) << "," << r.iterations << ","
                << (r.converged ? 1 : 0) << "," << format_double(r.final_loss) << "\n";
        }
    }
    {
        std::ofstream out(fs::path(dir) / "summary.csv");
        out << "variant,rounds,mean_accuracy,stddev_accuracy,converged_rate,mean_iterations\n";
        for (const auto& s : result.summaries) {
            out << s.variant << "," << s.rounds << "," << format_double(s.mean_accuracy) << ","
                << format_double(s.stddev_accuracy) << "," << format_double(s.converged_rate)
                << "," << format_double(s.mean_iterations) << "\n";
        }
    }
}

}  // namespace bsmf
