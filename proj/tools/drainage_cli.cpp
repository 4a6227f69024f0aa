// drainage: Monte Carlo experiments on the oriented drainage-network
// model with a shared uniform field. Each subcommand wraps one family of
// library operations and writes a deterministic results table.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drainage/analytic.hpp"
#include "drainage/parallel.hpp"
#include "drainage/stats.hpp"
#include "drainage/treescan.hpp"

namespace {

using drainage::Environment;
using drainage::LatticePoint;
using drainage::ModelParams;
using json = nlohmann::json;

std::string fmt_double(double v) {
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Accumulates a results table and writes it as CSV (leading '#'
/// metadata block, RFC-4180 payload) or JSON lines (one meta object,
/// then one object per row). Rerunning with the same config and seed
/// reproduces the payload byte for byte; only the metadata varies.
class ResultWriter {
public:
    ResultWriter(std::string command, std::vector<std::string> columns)
        : command_(std::move(command)), columns_(std::move(columns)) {}

    void meta(const std::string& key, const std::string& value) {
        meta_.emplace_back(key, value);
    }
    void meta(const std::string& key, double value) { meta(key, fmt_double(value)); }
    void meta(const std::string& key, std::int64_t value) {
        meta(key, std::to_string(value));
    }

    std::vector<std::string>& row() {
        rows_.emplace_back(columns_.size());
        return rows_.back();
    }

    void cell(std::vector<std::string>& r, std::size_t i, const std::string& v) {
        r[i] = v;
    }

    void write(std::ostream& os, const std::string& format, double wall_s) const {
        if (format == "csv")
            write_csv(os, wall_s);
        else
            write_jsonl(os, wall_s);
    }

private:
    static std::string csv_escape(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    void write_csv(std::ostream& os, double wall_s) const {
        os << "# drainage " << command_ << "\n";
        for (const auto& [k, v] : meta_) os << "# " << k << "=" << v << "\n";
        os << "# generated=" << iso_now() << " wall_time_s=" << std::setprecision(3)
           << wall_s << "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i)
            os << (i ? "," : "") << csv_escape(columns_[i]);
        os << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << csv_escape(r[i]);
            os << "\n";
        }
    }

    void write_jsonl(std::ostream& os, double wall_s) const {
        json meta;
        meta["command"] = command_;
        for (const auto& [k, v] : meta_) meta[k] = v;
        meta["generated"] = iso_now();
        meta["wall_time_s"] = wall_s;
        os << json{{"meta", meta}}.dump() << "\n";
        for (const auto& r : rows_) {
            json row;
            for (std::size_t i = 0; i < r.size(); ++i) row[columns_[i]] = r[i];
            os << row.dump() << "\n";
        }
    }

    std::string command_;
    std::vector<std::string> columns_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

struct CommonOpts {
    int d = 2;
    double p = 0.5;
    std::uint64_t seed = 1;
    int max_search_height = 64;
    long n_replicates = 1000;
    std::int64_t height = 1000;
    std::int64_t t_cap = 1000000;
    std::string format = "csv";
    std::string out;
    int threads = drainage::default_threads();
    bool overwrite = false;

    ModelParams params() const {
        ModelParams mp;
        mp.d = d;
        mp.p = p;
        mp.seed = seed;
        mp.max_search_height = max_search_height;
        mp.validate();
        return mp;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--d", o.d, "lattice dimension (>=2)");
    cmd->add_option("--p", o.p, "open probability in (0,1)");
    cmd->add_option("--seed", o.seed, "environment seed")->envname("DRAINAGE_SEED");
    cmd->add_option("--max-search-height", o.max_search_height,
                    "successor scan guard (levels)");
    cmd->add_option("--n-replicates", o.n_replicates, "number of replicates");
    cmd->add_option("--height", o.height, "trace height in levels");
    cmd->add_option("--t-cap", o.t_cap, "level cap for coalescence waits");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--threads", o.threads, "replicate-level parallelism");
    cmd->add_flag("--overwrite", o.overwrite, "allow clobbering an existing --out");
}

void echo_common(ResultWriter& w, const CommonOpts& o) {
    w.meta("d", static_cast<std::int64_t>(o.d));
    w.meta("p", o.p);
    w.meta("seed", std::to_string(o.seed));
    w.meta("max_search_height", static_cast<std::int64_t>(o.max_search_height));
    w.meta("n_replicates", static_cast<std::int64_t>(o.n_replicates));
    w.meta("height", o.height);
    w.meta("t_cap", o.t_cap);
    w.meta("threads", static_cast<std::int64_t>(o.threads));
    w.meta("version", DRAINAGE_VERSION);
}

void emit(const ResultWriter& w, const CommonOpts& o,
          std::chrono::steady_clock::time_point t0) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.out.empty()) {
        w.write(std::cout, o.format, wall);
        return;
    }
    if (std::filesystem::exists(o.out) && !o.overwrite)
        throw std::invalid_argument("--out: refusing to overwrite existing file " +
                                    o.out + " (pass --overwrite)");
    std::ofstream os(o.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file " + o.out);
    w.write(os, o.format, wall);
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoll(item));
    return out;
}

// "a,b;c,d" -> {{a,b},{c,d}}
std::vector<std::vector<std::int64_t>> parse_groups(const std::string& s) {
    std::vector<std::vector<std::int64_t>> out;
    std::stringstream ss(s);
    std::string group;
    while (std::getline(ss, group, ';'))
        if (!group.empty()) out.push_back(parse_int_list(group));
    return out;
}

drainage::ScalingParams exact_scaling(double p, int n) {
    return drainage::ScalingParams{std::sqrt(drainage::analytic::sigma2_exact(p)),
                                   drainage::analytic::gamma_exact(p), n};
}

// --- subcommand bodies -------------------------------------------------

int cmd_exact(const CommonOpts& o, int m_max) {
    const auto t0 = std::chrono::steady_clock::now();
    ResultWriter w("exact", {"quantity", "m", "value"});
    echo_common(w, o);
    for (int m = 0; m <= m_max; ++m) {
        auto& r = w.row();
        r[0] = "y_tail";
        r[1] = std::to_string(m);
        r[2] = fmt_double(drainage::analytic::y_tail(o.p, m));
    }
    auto& g = w.row();
    g[0] = "gamma";
    g[2] = fmt_double(drainage::analytic::gamma_exact(o.p));
    auto& s2 = w.row();
    s2[0] = "sigma2";
    s2[2] = fmt_double(drainage::analytic::sigma2_exact(o.p));
    auto& s = w.row();
    s[0] = "sigma";
    s[2] = fmt_double(std::sqrt(drainage::analytic::sigma2_exact(o.p)));
    emit(w, o, t0);
    return 0;
}

int cmd_trace(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    std::vector<std::string> cols{"replicate", "k"};
    for (int i = 1; i <= o.d; ++i) cols.push_back("c" + std::to_string(i));
    ResultWriter w("trace", cols);
    echo_common(w, o);

    auto paths = drainage::parallel_map(o.n_replicates, o.threads, [&](long i) {
        ModelParams ps = params;
        ps.seed = drainage::replicate_seed(params.seed, static_cast<std::uint64_t>(i));
        LatticePoint start;
        start.d = params.d;
        return drainage::trace(Environment(ps), start, o.height);
    });
    for (long i = 0; i < o.n_replicates; ++i) {
        const auto& path = paths[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < path.vertices.size(); ++k) {
            auto& r = w.row();
            r[0] = std::to_string(i);
            r[1] = std::to_string(k);
            for (int c = 0; c < o.d; ++c)
                r[static_cast<std::size_t>(2 + c)] = std::to_string(path.vertices[k].c[c]);
        }
    }
    emit(w, o, t0);
    return 0;
}

int cmd_regen(const CommonOpts& o, const std::string& starts_arg, long n_renewals) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    const auto groups = parse_groups(starts_arg);
    if (groups.size() < 1)
        throw std::invalid_argument("--starts: need at least one walker");
    std::vector<LatticePoint> starts;
    for (const auto& g : groups) {
        if (static_cast<int>(g.size()) != params.d - 1)
            throw std::invalid_argument("--starts: each walker needs d-1 coordinates");
        LatticePoint pt;
        pt.d = params.d;
        for (std::size_t i = 0; i < g.size(); ++i) pt.c[i] = g[i];
        starts.push_back(pt);
    }
    const std::size_t k = starts.size();

    std::vector<std::string> cols{"replicate", "l", "tau", "sigma", "T"};
    for (std::size_t wlk = 0; wlk < k; ++wlk)
        for (int c = 0; c < params.d - 1; ++c)
            cols.push_back("w" + std::to_string(wlk) + "_c" + std::to_string(c + 1));
    if (k == 2)
        for (int c = 0; c < params.d - 1; ++c) cols.push_back("z" + std::to_string(c + 1));
    ResultWriter w("regen", cols);
    echo_common(w, o);
    w.meta("starts", starts_arg);
    w.meta("n_renewals", static_cast<std::int64_t>(n_renewals));

    auto all = drainage::parallel_map(o.n_replicates, o.threads, [&](long i) {
        ModelParams ps = params;
        ps.seed = drainage::replicate_seed(params.seed, static_cast<std::uint64_t>(i));
        return drainage::run_regenerations(Environment(ps), starts, n_renewals);
    });
    for (long i = 0; i < o.n_replicates; ++i) {
        for (const auto& rec : all[static_cast<std::size_t>(i)]) {
            auto& r = w.row();
            std::size_t col = 0;
            r[col++] = std::to_string(i);
            r[col++] = std::to_string(rec.l);
            r[col++] = std::to_string(rec.tau);
            r[col++] = std::to_string(rec.sigma);
            r[col++] = std::to_string(rec.T);
            for (std::size_t wlk = 0; wlk < k; ++wlk)
                for (int c = 0; c < params.d - 1; ++c)
                    r[col++] = std::to_string(rec.positions[wlk].c[c]);
            if (k == 2) {
                const auto z = rec.pair_gap();
                for (int c = 0; c < params.d - 1; ++c) r[col++] = std::to_string(z[c]);
            }
        }
    }
    emit(w, o, t0);
    return 0;
}

int cmd_coalesce(const CommonOpts& o, const std::string& offsets_arg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    const auto offsets = parse_int_list(offsets_arg);
    ResultWriter w("coalesce", {"x", "replicate", "n_steps", "T", "censored"});
    echo_common(w, o);
    w.meta("x_offsets", offsets_arg);

    for (std::size_t oi = 0; oi < offsets.size(); ++oi) {
        const std::uint64_t salt = static_cast<std::uint64_t>(oi) << 40;
        auto recs = drainage::parallel_map(o.n_replicates, o.threads, [&](long i) {
            ModelParams ps = params;
            ps.seed = drainage::replicate_seed(params.seed,
                                               salt + static_cast<std::uint64_t>(i));
            return drainage::pair_coalescence(ps, offsets[oi], o.t_cap);
        });
        for (long i = 0; i < o.n_replicates; ++i) {
            const auto& rec = recs[static_cast<std::size_t>(i)];
            auto& r = w.row();
            r[0] = std::to_string(offsets[oi]);
            r[1] = std::to_string(i);
            r[2] = std::to_string(rec.n_steps);
            r[3] = std::to_string(rec.T_at_coalescence);
            r[4] = rec.hit_cap ? "1" : "0";
        }
    }
    emit(w, o, t0);
    return 0;
}

int cmd_triple(const CommonOpts& o, const std::string& triples_arg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    const auto triples = parse_groups(triples_arg);
    ResultWriter w("triple", {"x", "y", "z", "replicate", "n_steps", "T_n", "nu",
                              "nu_found", "T1", "censored"});
    echo_common(w, o);
    w.meta("triples", triples_arg);

    for (std::size_t ti = 0; ti < triples.size(); ++ti) {
        const auto& tr = triples[ti];
        if (tr.size() != 3) throw std::invalid_argument("--triples: need x,y,z");
        const std::uint64_t salt = static_cast<std::uint64_t>(ti) << 40;
        auto recs = drainage::parallel_map(o.n_replicates, o.threads, [&](long i) {
            ModelParams ps = params;
            ps.seed = drainage::replicate_seed(params.seed,
                                               salt + static_cast<std::uint64_t>(i));
            return drainage::triple_collision(ps, tr[0], tr[1], tr[2], o.t_cap);
        });
        for (long i = 0; i < o.n_replicates; ++i) {
            const auto& res = recs[static_cast<std::size_t>(i)];
            auto& r = w.row();
            r[0] = std::to_string(tr[0]);
            r[1] = std::to_string(tr[1]);
            r[2] = std::to_string(tr[2]);
            r[3] = std::to_string(i);
            r[4] = std::to_string(res.record.n_steps);
            r[5] = std::to_string(res.record.T_at_coalescence);
            r[6] = std::to_string(res.nu);
            r[7] = res.nu_found ? "1" : "0";
            r[8] = std::to_string(res.T1);
            r[9] = res.record.hit_cap ? "1" : "0";
        }
    }
    emit(w, o, t0);
    return 0;
}

int cmd_scaling(const CommonOpts& o, int diffusive_n, long endpoint_samples) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    ResultWriter w("scaling", {"quantity", "estimate", "se", "n"});
    echo_common(w, o);

    const auto est = drainage::estimate_scaling(params, o.n_replicates, o.threads);
    auto put = [&](const std::string& name, double v, double se, long n) {
        auto& r = w.row();
        r[0] = name;
        r[1] = fmt_double(v);
        r[2] = fmt_double(se);
        r[3] = std::to_string(n);
    };
    put("gamma_hat", est.gamma_hat.value, est.gamma_hat.se, est.gamma_hat.n);
    put("sigma_hat", est.sigma_hat.value, est.sigma_hat.se, est.sigma_hat.n);
    if (params.d == 2) {
        put("gamma_exact", drainage::analytic::gamma_exact(params.p), 0.0, 0);
        put("sigma_exact", std::sqrt(drainage::analytic::sigma2_exact(params.p)), 0.0, 0);
    }
    if (endpoint_samples > 0) {
        const auto scaling = exact_scaling(params.p, diffusive_n);
        auto sample = drainage::rescaled_endpoint_sample(params, scaling,
                                                         endpoint_samples, o.threads);
        drainage::MomentAccumulator acc;
        for (double v : sample) acc.add(v);
        put("endpoint_mean", acc.mean(), std::sqrt(acc.variance() / sample.size()),
            static_cast<long>(sample.size()));
        put("endpoint_var", acc.variance(), 0.0, static_cast<long>(sample.size()));
        put("endpoint_ks_vs_normal",
            drainage::ks_statistic(sample, &drainage::normal_cdf), 0.0,
            static_cast<long>(sample.size()));
    }
    emit(w, o, t0);
    return 0;
}

int cmd_eta(const CommonOpts& o, const std::string& eps_arg, double t, int diffusive_n) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    ResultWriter w("eta", {"epsilon", "window", "n", "p_ge2", "p_ge2_lo", "p_ge2_hi",
                           "p_ge3", "p_ge3_lo", "p_ge3_hi"});
    echo_common(w, o);
    w.meta("t", t);
    w.meta("diffusive_n", static_cast<std::int64_t>(diffusive_n));

    std::vector<double> eps_list;
    {
        std::stringstream ss(eps_arg);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) eps_list.push_back(std::stod(item));
    }
    const auto scaling = exact_scaling(params.p, diffusive_n);
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        ModelParams ps = params;
        ps.seed = drainage::replicate_seed(params.seed, static_cast<std::uint64_t>(i) << 40);
        const auto est = drainage::eta_estimate(ps, scaling, t, eps_list[i],
                                                o.n_replicates, o.threads);
        auto& r = w.row();
        r[0] = fmt_double(eps_list[i]);
        r[1] = std::to_string(est.window_width);
        r[2] = std::to_string(est.n);
        r[3] = fmt_double(est.ge2.p_hat);
        r[4] = fmt_double(est.ge2.lo);
        r[5] = fmt_double(est.ge2.hi);
        r[6] = fmt_double(est.ge3.p_hat);
        r[7] = fmt_double(est.ge3.lo);
        r[8] = fmt_double(est.ge3.hi);
    }
    emit(w, o, t0);
    return 0;
}

int cmd_treescan(const CommonOpts& o, const std::string& probe, std::int64_t half_width,
                 std::int64_t spacing) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelParams params = o.params();
    if (probe == "components") {
        ResultWriter w("treescan", {"height", "components"});
        echo_common(w, o);
        w.meta("probe", probe);
        w.meta("half_width", half_width);
        const auto report =
            drainage::component_count(drainage::BoxSpec{params, half_width, o.height});
        w.meta("starts", static_cast<std::int64_t>(report.starts));
        w.meta("components_at_top", static_cast<std::int64_t>(report.components_at_top));
        for (const auto& [h, c] : report.histogram) {
            auto& r = w.row();
            r[0] = std::to_string(h);
            r[1] = std::to_string(c);
        }
        emit(w, o, t0);
        return 0;
    }
    if (probe == "survival") {
        ResultWriter w("treescan",
                       {"spacing", "height", "survived", "n", "fraction", "ci_lo", "ci_hi"});
        echo_common(w, o);
        w.meta("probe", probe);
        const auto rep = drainage::pair_survival(params, spacing, o.height,
                                                 o.n_replicates, o.threads);
        auto& r = w.row();
        r[0] = std::to_string(rep.spacing);
        r[1] = std::to_string(rep.height);
        r[2] = std::to_string(rep.survived);
        r[3] = std::to_string(rep.n);
        r[4] = fmt_double(rep.fraction.p_hat);
        r[5] = fmt_double(rep.fraction.lo);
        r[6] = fmt_double(rep.fraction.hi);
        emit(w, o, t0);
        return 0;
    }
    throw std::invalid_argument("--probe: must be components or survival");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"drainage: deterministic Monte Carlo lab for an oriented "
                 "drainage-network model on Z^d"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value config file; flags take precedence");

    CommonOpts o;
    add_common(&app, o);

    int m_max = 8;
    auto* exact = app.add_subcommand("exact", "closed-form increment law and constants");
    exact->add_option("--m-max", m_max, "largest tail index");

    auto* tracec = app.add_subcommand("trace", "trace single paths");

    std::string starts_arg = "0;4";
    long n_renewals = 100;
    auto* regen = app.add_subcommand("regen", "joint walkers with renewal records");
    regen->add_option("--starts", starts_arg,
                      "walker spatial offsets, e.g. \"0;4\" or d=3 \"0,0;3,4\"");
    regen->add_option("--n-renewals", n_renewals, "renewals per replicate");

    std::string offsets_arg = "1,2,4,8";
    auto* coalesce = app.add_subcommand("coalesce", "pair coalescence times");
    coalesce->add_option("--x-offsets", offsets_arg, "initial gaps, comma separated");

    std::string triples_arg = "0,1,2";
    auto* triple = app.add_subcommand("triple", "three-walker collision times");
    triple->add_option("--triples", triples_arg, "semicolon-separated x,y,z triples");

    int diffusive_n = 100;
    long endpoint_samples = 0;
    auto* scaling = app.add_subcommand("scaling", "scaling constants and endpoints");
    scaling->add_option("--diffusive-n", diffusive_n, "diffusive index n");
    scaling->add_option("--endpoint-samples", endpoint_samples,
                        "rescaled endpoint sample size (0 = skip)");

    std::string eps_arg = "0.8,0.4";
    double eta_t = 1.0;
    auto* eta = app.add_subcommand("eta", "window counting probabilities");
    eta->add_option("--epsilon", eps_arg, "scaled window widths, comma separated");
    eta->add_option("--t", eta_t, "scaled time");
    eta->add_option("--diffusive-n", diffusive_n, "diffusive index n");

    std::string probe = "components";
    std::int64_t half_width = 25;
    std::int64_t spacing = 10;
    auto* treescan = app.add_subcommand("treescan", "finite-box tree probes");
    treescan->add_option("--probe", probe, "components or survival");
    treescan->add_option("--half-width", half_width, "spatial half width of the window");
    treescan->add_option("--spacing", spacing, "pair start gap (survival probe)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (exact->parsed()) return cmd_exact(o, m_max);
        if (tracec->parsed()) return cmd_trace(o);
        if (regen->parsed()) return cmd_regen(o, starts_arg, n_renewals);
        if (coalesce->parsed()) return cmd_coalesce(o, offsets_arg);
        if (triple->parsed()) return cmd_triple(o, triples_arg);
        if (scaling->parsed()) return cmd_scaling(o, diffusive_n, endpoint_samples);
        if (eta->parsed()) return cmd_eta(o, eps_arg, eta_t, diffusive_n);
        if (treescan->parsed()) return cmd_treescan(o, probe, half_width, spacing);
    } catch (const drainage::SearchExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
