#include "cli.hpp"

#include "bbf/analysis.hpp"
#include "bbf/baselines.hpp"
#include "bbf/parallel.hpp"
#include "bbf/random.hpp"
#include "bbf/serialize.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace bbf::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v)
{
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

struct Options {
    std::string data;
    bool header = false;
    std::vector<Index> drop;
    bool raw = false;
    std::string synth;
    std::string dataset;
    std::string kernel = "gaussian";
    double h = 1.0;
    double eps = 1e-2;
    std::string k = "auto";
    Index rmax = 300;
    Index oversample = 10;
    std::string partitioner = "kmeans";
    std::uint64_t seed = 0;
    Index trials = 1;
    std::string out;
    Index dense_cap = kDefaultDenseCap;
    bool no_cutoff = false;
    bool parallel_trials = false;

    std::vector<std::string> methods{"bbf", "nys", "knys", "lsnys", "rks", "svd"};
    std::string save;
    std::string model;
    std::string vector;
    std::vector<double> inv_h2{0.25, 1, 4, 25, 100};
    Index rank = 100;
    bool no_leverage = false;
    std::vector<Index> sizes{4000, 8000, 16000, 32000};
    Index apply_reps = 5;
};

struct Dataset {
    DataMatrix data;
    std::string name;
};

Dataset load_dataset(const Options& o)
{
    if (!o.data.empty() && !o.synth.empty())
        throw InvalidArgument("give either --data or --synth, not both");
    if (!o.synth.empty()) {
        const SynthSpec s = parse_synth(o.synth);
        return {synth_blobs(s.n, s.d, s.centers, s.spread, o.seed), o.dataset.empty() ? "synth" : o.dataset};
    }
    if (o.data.empty())
        throw InvalidArgument("no input: pass --data <csv> or --synth n=...,d=...,c=...,s=...");
    DataMatrix X = load_csv(o.data, o.header, o.drop);
    if (!o.raw)
        X = standardize(X);
    std::string name = o.dataset;
    if (name.empty())
        name = std::filesystem::path(o.data).stem().string();
    return {std::move(X), name};
}

KernelSpec kernel_of(const Options& o) { return KernelSpec(parse_kernel_family(o.kernel), o.h); }

BbfSettings settings_of(const Options& o)
{
    BbfSettings s;
    s.epsilon = o.eps;
    if (o.k != "auto") {
        try {
            std::size_t used = 0;
            s.k = std::stoll(o.k, &used);
            if (used != o.k.size())
                throw std::invalid_argument(o.k);
        } catch (const std::exception&) {
            throw InvalidArgument("--k must be an integer or 'auto', got '" + o.k + "'");
        }
    }
    s.partitioner = parse_partitioner(o.partitioner);
    s.ranks.r_max = o.rmax;
    s.ranks.oversample = o.oversample;
    s.build.oversample = o.oversample;
    s.build.cutoff = !o.no_cutoff;
    return s;
}

ExperimentRecord base_record(const Dataset& ds, const KernelSpec& spec, const std::string& method)
{
    ExperimentRecord r;
    r.method = method;
    r.dataset = ds.name;
    r.n = ds.data.n();
    r.d = ds.data.d();
    r.kernel = std::string(to_string(spec.family));
    r.h = spec.h;
    return r;
}

double apply_seconds(const KernelApproximation& f, std::uint64_t seed, Index reps)
{
    Rng rng(seed);
    Vector v(f.n());
    for (Index i = 0; i < f.n(); ++i)
        v(i) = rng.normal();
    const auto start = Clock::now();
    double sink = 0.0;
    for (Index t = 0; t < reps; ++t)
        sink += f.apply(v)(0);
    const double elapsed = seconds_since(start) / static_cast<double>(reps);
    volatile double keep = sink;
    (void)keep;
    return elapsed;
}

double measure_error(const KernelApproximation& f, const KernelMatrix& acc, Index dense_cap, std::uint64_t seed)
{
    if (acc.rows() <= dense_cap)
        return relative_error(f, acc, dense_cap);
    return relative_error_sampled(f, acc, 100 * acc.rows(), seed).value;
}

void warn_risk(const RankProfile& p, std::ostream& err)
{
    Index flagged = 0;
    for (char c : p.accuracy_risk)
        flagged += c != 0;
    if (flagged > 0)
        err << "warning: " << flagged << " cluster(s) reached r_max = " << p.r_max
            << " before the rank criterion held; accuracy may miss epsilon\n";
}

void print_summary(const std::string& method, const std::vector<double>& errors, std::ostream& err)
{
    if (errors.size() < 2)
        return;
    double mean = 0.0;
    for (double e : errors)
        mean += e;
    mean /= static_cast<double>(errors.size());
    double var = 0.0;
    for (double e : errors)
        var += (e - mean) * (e - mean);
    var /= static_cast<double>(errors.size() - 1);
    err << "# " << method << " rel_error mean " << format_double(mean) << " std " << format_double(std::sqrt(var))
        << " over " << errors.size() << " trials\n";
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback)
    {
        if (path.empty()) {
            stream_ = &fallback;
            return;
        }
        file_.open(path);
        if (!file_)
            throw Error("cannot open output file: " + path);
        stream_ = &file_;
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

void cmd_approx(const Options& o, std::ostream& out, std::ostream& err)
{
    const Dataset ds = load_dataset(o);
    const KernelSpec spec = kernel_of(o);
    const KernelMatrix acc(ds.data, spec);
    const BbfSettings settings = settings_of(o);
    if (o.trials < 1)
        throw InvalidArgument("--trials must be positive");

    std::vector<ExperimentRecord> rows(static_cast<std::size_t>(o.trials));
    std::vector<std::optional<BbfRun>> runs(static_cast<std::size_t>(o.trials));
    auto trial = [&](Index t) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(t);
        BbfRun run = run_bbf(acc, settings, seed);
        ExperimentRecord r = base_record(ds, spec, "bbf");
        r.param = o.eps;
        r.memory = run.factorization.memory_count();
        r.build_s = run.build_seconds;
        r.apply_s = apply_seconds(run.factorization, seed, o.apply_reps);
        r.rel_error = measure_error(run.factorization, acc, o.dense_cap, derive_seed(seed, {0xe77}));
        r.seed = seed;
        rows[static_cast<std::size_t>(t)] = r;
        runs[static_cast<std::size_t>(t)] = std::move(run);
    };
    if (o.parallel_trials) {
        parallel_for(o.trials, trial);
    } else {
        for (Index t = 0; t < o.trials; ++t)
            trial(t);
    }

    Output csv(o.out, out);
    *csv << kCsvHeader << '\n';
    std::vector<double> errors;
    for (const auto& r : rows) {
        *csv << to_csv(r) << '\n';
        errors.push_back(*r.rel_error);
    }
    warn_risk(runs.front()->profile, err);
    print_summary("bbf", errors, err);
    if (!o.save.empty())
        save_bbf(o.save, runs.front()->factorization);
}

std::optional<std::string> infeasible_reason(const std::string& method, Index r, Index n, Index dense_cap,
                                             const KernelSpec& spec)
{
    if ((method == "nys" || method == "lsnys") && 2 * r > n)
        return "2r > n";
    if (method == "knys" && r > n)
        return "r > n";
    if ((method == "svd" || method == "lsnys") && n > dense_cap)
        return "n exceeds the dense cap";
    if (method == "svd" && r > n)
        return "r > n";
    if (method == "rks" && spec.family != KernelFamily::Gaussian)
        return "rks needs the Gaussian kernel";
    return std::nullopt;
}

void cmd_compare(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.methods.empty())
        throw InvalidArgument("--methods is empty");
    for (const auto& m : o.methods)
        if (m != "bbf" && m != "nys" && m != "knys" && m != "lsnys" && m != "rks" && m != "svd")
            throw InvalidArgument("unknown method '" + m + "'");
    if (o.trials < 1)
        throw InvalidArgument("--trials must be positive");

    const Dataset ds = load_dataset(o);
    const KernelSpec spec = kernel_of(o);
    const KernelMatrix acc(ds.data, spec);
    const BbfSettings settings = settings_of(o);
    const Index n = ds.data.n();

    std::optional<Matrix> dense;
    auto dense_K = [&]() -> const Matrix& {
        if (!dense)
            dense = acc.dense();
        return *dense;
    };
    std::map<Index, Vector> leverage_cache;

    Output csv(o.out, out);
    *csv << kCsvHeader << '\n';
    std::map<std::string, std::vector<double>> errors;
    for (Index t = 0; t < o.trials; ++t) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(t);
        BbfRun run = run_bbf(acc, settings, seed);
        if (t == 0)
            warn_risk(run.profile, err);
        const double bbf_memory = run.factorization.memory_count();
        const Index r = std::max<Index>(1, std::llround(bbf_memory / static_cast<double>(n)));

        for (const auto& method : o.methods) {
            ExperimentRecord rec = base_record(ds, spec, method);
            rec.seed = seed;
            const std::uint64_t error_seed = derive_seed(seed, {0xe77});
            if (method == "bbf") {
                rec.param = o.eps;
                rec.memory = bbf_memory;
                rec.build_s = run.build_seconds;
                rec.apply_s = apply_seconds(run.factorization, seed, o.apply_reps);
                rec.rel_error = measure_error(run.factorization, acc, o.dense_cap, error_seed);
                errors[method].push_back(*rec.rel_error);
                *csv << to_csv(rec) << '\n';
                continue;
            }
            rec.param = static_cast<double>(r);
            rec.memory = static_cast<double>(n) * static_cast<double>(r);
            if (auto why = infeasible_reason(method, r, n, o.dense_cap, spec)) {
                err << "# " << method << " infeasible at r = " << r << ": " << *why << '\n';
                *csv << to_csv(rec) << '\n';
                continue;
            }
            const std::uint64_t method_seed = derive_seed(seed, {std::hash<std::string>{}(method)});
            const auto start = Clock::now();
            std::optional<LowRankFactor> f;
            if (method == "nys") {
                f = nystrom_uniform(acc, r, method_seed);
            } else if (method == "knys") {
                f = nystrom_kmeans(acc, r, method_seed);
            } else if (method == "lsnys") {
                auto it = leverage_cache.find(r);
                if (it == leverage_cache.end())
                    it = leverage_cache.emplace(r, leverage_scores_exact(acc, r, o.dense_cap)).first;
                f = nystrom_leverage(acc, r, method_seed, o.dense_cap, &it->second);
            } else if (method == "rks") {
                f = rks_features(acc, r, method_seed);
            } else {
                f = truncated_svd_baseline(dense_K(), r);
            }
            rec.build_s = seconds_since(start);
            rec.apply_s = apply_seconds(*f, seed, o.apply_reps);
            rec.rel_error = dense ? relative_error(*f, *dense) : measure_error(*f, acc, o.dense_cap, error_seed);
            errors[method].push_back(*rec.rel_error);
            *csv << to_csv(rec) << '\n';
        }
    }
    for (const auto& [method, e] : errors)
        print_summary(method, e, err);
}

void cmd_stats(const Options& o, std::ostream& out, std::ostream&)
{
    Dataset ds = load_dataset(o);
    if (o.inv_h2.empty())
        throw InvalidArgument("--inv-h2 is empty");
    Output csv(o.out, out);
    *csv << "dataset,n,kernel,inv_h2,h,r,stable_rank,eig_ratio,frob_capture,scaled_leverage\n";
    for (double g : o.inv_h2) {
        if (!(g > 0.0))
            throw InvalidArgument("--inv-h2 values must be positive");
        const KernelSpec spec(parse_kernel_family(o.kernel), 1.0 / std::sqrt(g));
        const KernelMatrix acc(ds.data, spec);
        const SpectralStats s = spectral_stats(acc, o.rank, !o.no_leverage, o.dense_cap);
        *csv << ds.name << ',' << ds.data.n() << ',' << to_string(spec.family) << ',' << format_double(g) << ','
             << format_double(spec.h) << ',' << s.r << ',' << s.stable_rank << ',' << format_double(s.eig_ratio) << ','
             << format_double(s.frob_capture) << ','
             << (std::isnan(s.scaled_leverage) ? std::string("NA") : format_double(s.scaled_leverage)) << '\n';
    }
}

void cmd_scaling(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.sizes.empty())
        throw InvalidArgument("--sizes is empty");
    if (o.k == "auto")
        throw InvalidArgument("scaling needs a fixed --k");
    const BbfSettings settings = settings_of(o);
    const SynthSpec base = o.synth.empty() ? SynthSpec{} : parse_synth(o.synth);
    const KernelSpec spec = kernel_of(o);

    Output csv(o.out, out);
    *csv << kCsvHeader << '\n';
    std::vector<double> ns;
    std::vector<double> build;
    std::vector<double> apply;
    for (Index n : o.sizes) {
        const Dataset ds{synth_blobs(n, base.d, base.centers, base.spread, o.seed),
                         o.dataset.empty() ? "synth" : o.dataset};
        const KernelMatrix acc(ds.data, spec);
        const auto start = Clock::now();
        const Clustering c = cluster_points(ds.data, settings.partitioner, *settings.k, derive_seed(o.seed, {1}));
        const double frob = estimate_frobenius(acc, 100 * n, derive_seed(o.seed, {2}));
        const RankProfile p = fixed_rank_profile(c, o.rank, o.eps, frob);
        const BBFactorization f = build_bbf(acc, c, p, derive_seed(o.seed, {3}), settings.build);
        ExperimentRecord r = base_record(ds, spec, "bbf");
        r.build_s = seconds_since(start);
        r.apply_s = apply_seconds(f, o.seed, o.apply_reps);
        r.param = static_cast<double>(o.rank);
        r.memory = f.memory_count();
        r.rel_error = relative_error_sampled(f, acc, 100 * n, derive_seed(o.seed, {4})).value;
        r.seed = o.seed;
        *csv << to_csv(r) << '\n';
        ns.push_back(static_cast<double>(n));
        build.push_back(r.build_s);
        apply.push_back(r.apply_s);
    }
    auto show = [](double s) { return std::isnan(s) ? std::string("NA") : format_double(s); };
    err << "# log-log slope build_s " << show(loglog_slope(ns, build)) << " apply_s "
        << show(loglog_slope(ns, apply)) << '\n';
}

void cmd_synth(const Options& o, std::ostream& out, std::ostream&)
{
    if (o.synth.empty())
        throw InvalidArgument("synth needs --synth n=...,d=...,c=...,s=...");
    const SynthSpec s = parse_synth(o.synth);
    const DataMatrix X = synth_blobs(s.n, s.d, s.centers, s.spread, o.seed);
    if (o.out.empty()) {
        out << std::setprecision(17);
        for (Index i = 0; i < X.n(); ++i) {
            for (Index j = 0; j < X.d(); ++j)
                out << (j ? "," : "") << X.points(i, j);
            out << '\n';
        }
        return;
    }
    save_csv(o.out, X, false);
}

void print_model(const BBFactorization& f, std::ostream& out)
{
    Index rank_sum = 0;
    Index rank_max = 0;
    for (Index r : f.ranks()) {
        rank_sum += r;
        rank_max = std::max(rank_max, r);
    }
    out << "n " << f.n() << "\nk " << f.k() << "\nkernel " << to_string(f.kernel().family) << "\nh "
        << format_double(f.kernel().h) << "\nepsilon " << format_double(f.epsilon()) << "\nrank_sum " << rank_sum
        << "\nrank_max " << rank_max << "\nskipped_blocks " << f.skipped_count() << "\nmemory "
        << format_double(f.memory_count()) << '\n';
}

void cmd_save(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string path = !o.model.empty() ? o.model : o.save;
    if (path.empty())
        throw InvalidArgument("save needs --model <path>");
    const Dataset ds = load_dataset(o);
    const KernelMatrix acc(ds.data, kernel_of(o));
    BbfRun run = run_bbf(acc, settings_of(o), o.seed);
    warn_risk(run.profile, err);
    save_bbf(path, run.factorization);
    print_model(run.factorization, out);
}

void cmd_load(const Options& o, std::ostream& out, std::ostream&)
{
    if (o.model.empty())
        throw InvalidArgument("load needs --model <path>");
    print_model(load_bbf(o.model), out);
}

Vector read_vector(const std::string& path, Index n)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open vector file: " + path);
    std::vector<double> values;
    std::string line;
    Index row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(line, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || line.find_first_not_of(" \t\r", used) != std::string::npos)
            throw ParseError("vector file: cannot parse row " + std::to_string(row), row, 1);
        values.push_back(value);
    }
    if (static_cast<Index>(values.size()) != n)
        throw InvalidArgument("vector file has " + std::to_string(values.size()) + " entries, model has n = " +
                              std::to_string(n));
    return Eigen::Map<Vector>(values.data(), n);
}

void cmd_matvec(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.model.empty())
        throw InvalidArgument("matvec needs --model <path>");
    const BBFactorization f = load_bbf(o.model);
    const Vector v = o.vector.empty() ? Vector::Ones(f.n()) : read_vector(o.vector, f.n());
    const auto start = Clock::now();
    const Vector y = f.apply(v);
    err << "# apply_s " << format_double(seconds_since(start)) << '\n';
    Output dst(o.out, out);
    *dst << std::setprecision(17);
    for (Index i = 0; i < y.size(); ++i)
        *dst << y(i) << '\n';
}

} // namespace

std::string to_csv(const ExperimentRecord& r)
{
    std::ostringstream s;
    s << r.method << ',' << r.dataset << ',' << r.n << ',' << r.d << ',' << r.kernel << ',' << format_double(r.h)
      << ',' << format_double(r.param) << ',' << format_double(r.memory) << ','
      << (r.rel_error ? format_double(*r.rel_error) : std::string("infeasible")) << ',' << format_double(r.build_s)
      << ',' << format_double(r.apply_s) << ',' << r.seed;
    return s.str();
}

SynthSpec parse_synth(const std::string& text)
{
    SynthSpec s;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("--synth: expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "n")
                s.n = std::stoll(value);
            else if (key == "d")
                s.d = std::stoll(value);
            else if (key == "c")
                s.centers = std::stoll(value);
            else if (key == "s")
                s.spread = std::stod(value);
            else
                throw InvalidArgument("--synth: unknown key '" + key + "'");
        } catch (const InvalidArgument&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidArgument("--synth: bad value for '" + key + "': '" + value + "'");
        }
    }
    return s;
}

BbfRun run_bbf(const KernelMatrix& acc, const BbfSettings& settings, std::uint64_t seed)
{
    const auto start = Clock::now();
    const Index n = acc.rows();
    const double frob = frobenius_squared(acc, settings.ranks.exact_frob_cap, settings.ranks.frob_samples_per_point,
                                          derive_seed(seed, {0xf20b}));
    Clustering c;
    RankProfile p;
    if (settings.k) {
        c = cluster_points(acc.data(), settings.partitioner, *settings.k, derive_seed(seed, {1}));
        p = estimate_ranks(acc, c, settings.epsilon, derive_seed(seed, {2}), settings.ranks, frob);
    } else {
        const auto k_max = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
        SelectKResult sel =
            select_k(acc, settings.epsilon, 1, k_max, derive_seed(seed, {3}), settings.partitioner, settings.ranks, frob);
        c = std::move(sel.clustering);
        p = std::move(sel.profile);
    }
    BBFactorization f = build_bbf(acc, c, p, derive_seed(seed, {4}), settings.build);
    const double elapsed = seconds_since(start);
    return BbfRun{std::move(f), std::move(c), std::move(p), elapsed};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw InvalidArgument("loglog_slope: length mismatch");
    if (x.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return sxy / sxx;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Block Basis Factorization of kernel matrices"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--data", o.data, "CSV file with one point per row");
    app.add_flag("--header", o.header, "skip the first CSV row");
    app.add_option("--drop", o.drop, "0-based CSV columns to drop")->delimiter(',');
    app.add_flag("--raw", o.raw, "do not standardize CSV features");
    app.add_option("--synth", o.synth, "synthetic blobs, e.g. n=2000,d=5,c=10,s=0.1");
    app.add_option("--dataset", o.dataset, "dataset name for CSV output");
    app.add_option("--kernel", o.kernel, "gaussian or laplacian");
    app.add_option("--h", o.h, "kernel bandwidth")->check(CLI::PositiveNumber);
    app.add_option("--eps", o.eps, "target relative Frobenius accuracy");
    app.add_option("--k", o.k, "cluster count or 'auto'");
    app.add_option("--rmax", o.rmax, "per-cluster rank cap")->check(CLI::PositiveNumber);
    app.add_option("--oversample", o.oversample, "oversampling l")->check(CLI::NonNegativeNumber);
    app.add_option("--partitioner", o.partitioner, "kmeans or kcenter");
    app.add_option("--seed", o.seed, "base seed; trial t uses seed + t");
    app.add_option("--trials", o.trials, "repetitions with distinct seeds");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--dense-cap", o.dense_cap, "largest n for dense error evaluation")
        ->check(CLI::Range(Index{1}, kHardDenseCap));
    app.add_flag("--no-cutoff", o.no_cutoff, "never skip off-diagonal blocks");
    app.add_flag("--parallel-trials", o.parallel_trials, "run trials concurrently");
    app.add_option("--apply-reps", o.apply_reps, "matvecs averaged for apply timing")->check(CLI::PositiveNumber);

    auto* approx = app.add_subcommand("approx", "build BBF and report its error");
    approx->add_option("--save", o.save, "write the first trial's factorization here");
    auto* compare = app.add_subcommand("compare", "BBF against baselines at matched memory");
    compare->add_option("--methods", o.methods, "bbf,nys,knys,lsnys,rks,svd")->delimiter(',');
    auto* stats = app.add_subcommand("stats", "spectral statistics over a 1/h^2 grid");
    stats->add_option("--inv-h2", o.inv_h2, "comma separated 1/h^2 values")->delimiter(',');
    stats->add_option("--rank", o.rank, "reference rank r");
    stats->add_flag("--no-leverage", o.no_leverage, "skip leverage scores (no eigenvectors)");
    auto* scaling = app.add_subcommand("scaling", "build and apply timing over a doubling schedule");
    scaling->add_option("--sizes", o.sizes, "comma separated n values")->delimiter(',');
    scaling->add_option("--rank", o.rank, "fixed per-cluster rank");
    auto* synth = app.add_subcommand("synth", "write synthetic blob data as CSV");
    auto* save = app.add_subcommand("save", "build BBF and write it to --model");
    save->add_option("--model", o.model, "factorization file");
    auto* load = app.add_subcommand("load", "print a summary of a saved factorization");
    load->add_option("--model", o.model, "factorization file")->required();
    auto* matvec = app.add_subcommand("matvec", "apply a saved factorization to a vector");
    matvec->add_option("--model", o.model, "factorization file")->required();
    matvec->add_option("--vector", o.vector, "one value per line (default all ones)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (approx->parsed())
            cmd_approx(o, out, err);
        else if (compare->parsed())
            cmd_compare(o, out, err);
        else if (stats->parsed())
            cmd_stats(o, out, err);
        else if (scaling->parsed())
            cmd_scaling(o, out, err);
        else if (synth->parsed())
            cmd_synth(o, out, err);
        else if (save->parsed())
            cmd_save(o, out, err);
        else if (load->parsed())
            cmd_load(o, out, err);
        else if (matvec->parsed())
            cmd_matvec(o, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"bbf"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace bbf::cli
