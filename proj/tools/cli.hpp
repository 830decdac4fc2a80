#ifndef BBF_TOOLS_CLI_HPP
#define BBF_TOOLS_CLI_HPP

#include "bbf/bbf.hpp"
#include "bbf/cluster.hpp"
#include "bbf/data.hpp"
#include "bbf/kernel.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bbf::cli {

/// One CSV row of an experiment.
struct ExperimentRecord {
    std::string method;
    std::string dataset;
    Index n = 0;
    Index d = 0;
    std::string kernel;
    double h = 0.0;
    double param = 0.0;
    double memory = 0.0;
    std::optional<double> rel_error; // empty when infeasible
    double build_s = 0.0;
    double apply_s = 0.0;
    std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader = "method,dataset,n,d,kernel,h,param,memory,rel_error,build_s,apply_s,seed";

std::string to_csv(const ExperimentRecord& r);

struct SynthSpec {
    Index n = 2000;
    Index d = 5;
    Index centers = 10;
    double spread = 0.1;
};

// "n=2000,d=5,c=10,s=0.1"; omitted keys keep their defaults.
SynthSpec parse_synth(const std::string& text);

struct BbfSettings {
    double epsilon = 1e-2;
    std::optional<Index> k; // empty: select_k over [1, ceil(sqrt(n))]
    Partitioner partitioner = Partitioner::KMeans;
    RankOptions ranks;
    BuildOptions build;
};

struct BbfRun {
    BBFactorization factorization;
    Clustering clustering;
    RankProfile profile;
    double build_seconds = 0.0;
};

// Clustering (or k selection), rank estimation and construction, timed.
BbfRun run_bbf(const KernelMatrix& acc, const BbfSettings& settings, std::uint64_t seed);

// Runs the command line and returns the process exit code. Output goes to
// `out` unless --out names a file; diagnostics go to `err`. The vector form
// takes the arguments without the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Least-squares slope of log(y) against log(x); NaN for fewer than two points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace bbf::cli

#endif
