#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsmf/belief.hpp"
#include "bsmf/dataset.hpp"
#include "bsmf/evaluation.hpp"
#include "bsmf/factorization.hpp"
#include "bsmf/interpolate.hpp"
#include "bsmf/synthetic.hpp"

namespace bsmf {

/// Stage toggles. Disabling both modules factorizes the raw binary X
/// (the BSMF-MS ablation); disabling one gives BSMF-M (no similarity
/// interpolation) or BSMF-S (no graph smoothing).
struct PipelineOptions {
    bool run_m = true;
    bool run_s = true;
    bool symmetrize_graph = false;
    RbfParams rbf;
};

struct PipelineResult {
    FitResult fit;
    Assignment assignment;
    std::optional<MetricsReport> metrics;  // present when the dataset has labels
};

/// ingest -> M-module -> S-module -> fit -> assign -> score (when labels).
PipelineResult run_pipeline(const Dataset& ds, const BeliefMixture& belief, const FitConfig& cfg,
                            const PipelineOptions& opts);

/// Writes u.csv, m.csv, b.csv, assignments.csv, loss_trace.csv, run.json and
/// (with labels) metrics.json into `dir`.
void write_run_artifacts(const Dataset& ds, const BeliefMixture& belief,
                         const PipelineOptions& opts, const PipelineResult& result,
                         const std::string& dir);

DenseMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const DenseMatrix& m, const std::string& path);

struct BenchmarkConfig {
    SynthSpec synth;
    FitConfig fit = default_benchmark_fit();  // seed is re-derived per round as seed + round
    PipelineOptions pipeline = {true, true, false, {1.5, 0.2}};
    std::size_t rounds = 200;
    bool ablation = false;  // replace the mode variants with module toggles

    static FitConfig default_benchmark_fit() {
        FitConfig cfg;
        cfg.max_iters = 200;  // the benchmark's convergence budget
        return cfg;
    }
};

struct RoundRecord {
    std::size_t round = 0;
    std::string variant;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    double final_loss = 0.0;
};

struct VariantSummary {
    std::string variant;
    std::size_t rounds = 0;
    double mean_accuracy = 0.0;
    double stddev_accuracy = 0.0;
    double converged_rate = 0.0;   // fraction of rounds with converged == true
    double mean_iterations = 0.0;
};

struct BenchmarkResult {
    std::vector<RoundRecord> rounds;
    std::vector<VariantSummary> summaries;

    const VariantSummary& summary(const std::string& variant) const;
};

/// Runs the requested variants on freshly generated synthetic data, one
/// dataset per round with seed base+round shared by generator and solver.
/// Default variants are the three factorization modes; with cfg.ablation the
/// bsmf module toggles are benchmarked instead.
BenchmarkResult run_benchmark(const BenchmarkConfig& cfg);

void write_benchmark_csv(const BenchmarkResult& result, const std::string& dir);

}  // namespace bsmf
