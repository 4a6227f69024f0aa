// C12-C14: d=3 drift, tree probes and CLI determinism.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "acceptance/harness.hpp"
#include "drainage/stats.hpp"
#include "drainage/treescan.hpp"

namespace acceptance {
namespace {

using namespace drainage;

CriterionResult c12(const Config& cfg) {
    const long n = 100000;
    std::string detail;
    for (const std::int64_t gap : {20, 40}) {
        ModelParams params{3, 0.5, 1200 + static_cast<std::uint64_t>(gap), 64};
        const LyapunovDrift drift = lyapunov_drift(params, gap, 0, n, cfg.threads);
        const double upper = drift.controlled.value + kZ99 * drift.controlled.se;
        detail += format("drift(|x|=", gap, ")=", drift.controlled.value, "±",
                         kZ99 * drift.controlled.se, " (plain ", drift.plain.value,
                         "±", kZ99 * drift.plain.se, "); ");
        if (upper > 0.0)
            return {false, detail + format("99% upper bound ", upper, " > 0")};
    }
    AlphaEstimate alphas[3];
    const std::int64_t gaps[3] = {10, 20, 40};
    for (int i = 0; i < 3; ++i) {
        ModelParams params{3, 0.5, 1300 + static_cast<std::uint64_t>(i), 64};
        alphas[i] = alpha_estimate(params, gaps[i], 0, n, cfg.threads);
        if (alphas[i].alpha.value < -kZ99 * alphas[i].alpha.se)
            return {false, format("alpha(|x|=", gaps[i], ") = ", alphas[i].alpha.value,
                                  " significantly negative")};
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double lo_i = alphas[i].alpha.ci_lo(kZ99),
                         hi_i = alphas[i].alpha.ci_hi(kZ99);
            const double lo_j = alphas[j].alpha.ci_lo(kZ99),
                         hi_j = alphas[j].alpha.ci_hi(kZ99);
            if (hi_i < lo_j || hi_j < lo_i)
                return {false, format("alpha CIs at |x|=", gaps[i], " and ", gaps[j],
                                      " do not overlap")};
        }
    detail += format("alpha=", alphas[0].alpha.value, "/", alphas[1].alpha.value, "/",
                     alphas[2].alpha.value, " (overlapping CIs)");
    return {true, detail};
}

CriterionResult c13(const Config& cfg) {
    const auto d2 =
        pair_survival(ModelParams{2, 0.5, 1313, 64}, 10, 1000000, 1000, cfg.threads);
    const double coalesced =
        1.0 - static_cast<double>(d2.survived) / static_cast<double>(d2.n);
    if (coalesced < 0.99)
        return {false, format("d=2 coalescence fraction ", coalesced, " < 0.99 (",
                              d2.survived, " survivors)")};
    const auto d4 =
        pair_survival(ModelParams{4, 0.5, 1414, 64}, 10, 10000, 300, cfg.threads);
    if (!(d4.fraction.lo > 0.0))
        return {false, format("d=4 survival CI touches 0: lo=", d4.fraction.lo)};
    return {true, format("d=2 coalesced ", coalesced, " (", d2.survived,
                         "/1000 survive 1e6); d=4 survival ", d4.fraction.p_hat,
                         " with 99% lo=", d4.fraction.lo)};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// payload = lines after the metadata ('#' lines for csv; first line for json)
std::string payload_of(const std::string& text, bool json) {
    std::stringstream ss(text);
    std::string line, payload;
    bool first = true;
    while (std::getline(ss, line)) {
        if (json) {
            if (first) {
                first = false;
                continue;
            }
        } else if (!line.empty() && line[0] == '#') {
            continue;
        }
        payload += line;
        payload += '\n';
    }
    return payload;
}

CriterionResult c14(const Config& cfg) {
    if (cfg.cli_path.empty()) return {false, "cli path not provided"};
    const std::string tmp = "/tmp/drainage_acceptance_cli.out";
    auto run = [&](const std::string& args) -> std::string {
        const std::string cmd = cfg.cli_path + " " + args + " > " + tmp + " 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) return "";
        return slurp(tmp);
    };
    const struct {
        std::string args;
        bool json;
    } cases[] = {
        {"coalesce --p 0.5 --seed 4242 --x-offsets 1,2 --n-replicates 300 --t-cap 20000",
         false},
        {"regen --p 0.5 --seed 7 --starts \"0;4\" --n-renewals 25 --n-replicates 40",
         false},
        {"scaling --p 0.5 --seed 12 --n-replicates 20000 --format json", true},
        {"eta --p 0.5 --seed 5 --epsilon 0.5 --diffusive-n 20 --n-replicates 50", false},
    };
    for (const auto& c : cases) {
        const std::string p1 = payload_of(run(c.args + " --threads 1"), c.json);
        const std::string p2 = payload_of(run(c.args + " --threads 2"), c.json);
        const std::string p5 = payload_of(run(c.args + " --threads 5"), c.json);
        const std::string p1b = payload_of(run(c.args + " --threads 1"), c.json);
        if (p1.empty()) return {false, format("command failed: ", c.args)};
        if (p1 != p2 || p1 != p5 || p1 != p1b)
            return {false, format("payload differs across threads/reruns for: ", c.args)};
    }
    std::remove(tmp.c_str());
    return {true, "4 commands byte-identical across --threads 1/2/5 and reruns"};
}

Register r12("C12", "d3-drift-and-alpha", c12);
Register r13("C13", "tree-probes", c13);
Register r14("C14", "cli-determinism", c14);

}  // namespace
}  // namespace acceptance
