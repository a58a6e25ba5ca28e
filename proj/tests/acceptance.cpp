// One PASS/FAIL line per acceptance criterion at the pinned sample sizes.
// Exits 1 when any criterion fails.

#include "qss/errors.hpp"
#include "qss/graph.hpp"
#include "qss/oracle.hpp"
#include "qss/protocols.hpp"
#include "qss/schemes.hpp"
#include "qss/verify.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace qss;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << number << " " << name << ": " << o.detail << " ["
              << format_real(secs, 2) << " s]\n"
              << std::flush;
}

Outcome from(const CheckResult& r) { return {r.pass, r.detail}; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = "'" + std::string(QSS_CLI_PATH) + "' " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<Amplitude> random_alpha(std::size_t n, Rng& rng) {
    std::vector<Amplitude> a(n);
    double norm = 0;
    for (auto& x : a) {
        const double re = rng.normal();
        const double im = rng.normal();
        x = {re, im};
        norm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(norm);
    return a;
}

} // namespace

int main() {
    const std::string fixtures = QSS_FIXTURE_DIR;

    criterion(1, "stabilizer eigen-equation", [] {
        Rng rng(1);
        return from(check_stabilizer_eigen({3, 5, 7}, 2, 5, 100, rng));
    });

    criterion(2, "measurement rules", [] {
        Rng rng(2);
        return from(check_measurement_rules({3, 5}, 4, 50, rng));
    });

    criterion(3, "square shuffle regression", [] { return from(check_square_shuffle()); });

    criterion(4, "square measurement arbitration", [&] {
        const auto golden = load_graph_file(fixtures + "/measured_square_reduced_d5.graph");
        return from(check_square_measurement(&golden));
    });

    criterion(5, "cc thresholds", [] {
        std::size_t pairs = 0, bad = 0;
        double worst = 0;
        for (std::uint32_t d : {3u, 5u})
            for (const auto& [name, n] : std::vector<std::pair<std::string, std::size_t>>{
                     {"tree", 3}, {"tree", 4}, {"tree", 5}, {"twothree", 3}, {"ring34", 4}, {"ring35", 5}}) {
                const auto scheme = make_scheme(name, d, n);
                for (const auto& sub : all_player_subsets(n)) {
                    ++pairs;
                    const bool authorised = sub.size() >= scheme.threshold;
                    bool ok = true;
                    for (std::uint32_t s = 0; s < d && ok; ++s) {
                        const auto enc = cc_encode(scheme, FieldElement(s, d));
                        const auto r = cc_recover(scheme, enc, sub, RecoveryMode::Symbolic, s);
                        ok = r.recovered == authorised &&
                             (authorised ? r.secret == FieldElement(s, d) : r.certificate.has_value());
                    }
                    if (ok && !authorised) {
                        const double td = cc_denial_distance(scheme, sub);
                        worst = std::max(worst, td);
                        ok = td < 1e-10;
                    }
                    bad += ok ? 0 : 1;
                }
            }
        std::ostringstream os;
        os << pairs << " (d, scheme, subset) cases, " << bad << " wrong, max denied trace distance " << worst;
        return Outcome{bad == 0, os.str()};
    });

    criterion(6, "cq sift rate and key agreement", [] {
        bool pass = true;
        std::ostringstream os;
        const double p = 1.0 / 3, se = std::sqrt(p * (1 - p) / 2000);
        for (const char* name : {"tree", "twothree", "ring35"}) {
            CqConfig cfg;
            cfg.rounds = 2000;
            cfg.seed = 6;
            const auto r = cq_run(make_scheme(name, 3, 3), cfg);
            const double z = (r.kept_fraction - p) / se;
            pass = pass && std::abs(z) <= 5 && r.mismatches == 0 && r.kept > 0;
            os << name << " kept " << format_real(r.kept_fraction, 4) << " (" << format_real(z, 2) << " se), mismatches "
               << r.mismatches << "; ";
        }
        return Outcome{pass, os.str()};
    });

    criterion(7, "cq stabilizer identities", [] {
        std::size_t cases = 0, bad = 0, checked = 0, violations = 0;
        for (std::uint32_t d : {3u, 5u})
            for (const char* name : {"twothree", "ring35"}) {
                for (std::uint32_t t = 0; t < d; ++t) {
                    ++cases;
                    bad += cq_stabilizer_identity(make_scheme(name, d), FieldElement(t, d)).holds() ? 0 : 1;
                }
                CqConfig cfg;
                cfg.rounds = 600;
                cfg.seed = 7;
                cfg.sacrifice = 1.0;
                const auto r = cq_run(make_scheme(name, d), cfg);
                checked += r.sacrificed;
                violations += r.violations;
            }
        std::ostringstream os;
        os << cases << " operator identities, " << bad << " fail; " << checked << " kept rounds simulated, "
           << violations << " with outcome != 1";
        return Outcome{bad == 0 && violations == 0 && checked > 0, os.str()};
    });

    criterion(8, "cq eavesdropper detection", [] {
        bool pass = true;
        std::ostringstream os;
        for (const char* name : {"twothree", "ring35"}) {
            CqConfig cfg;
            cfg.rounds = 2000;
            cfg.seed = 8;
            cfg.eavesdropper = Eavesdropper::InterceptResend;
            const auto r = cq_run(make_scheme(name, 3), cfg);
            pass = pass && r.violation_rate > 0.05;
            os << name << " violations " << r.violations << " of " << r.sacrificed << " (rate "
               << format_real(r.violation_rate, 4) << "); ";
        }
        return Outcome{pass, os.str()};
    });

    criterion(9, "cq security audit", [] {
        Rng rng(9);
        double worst = 0;
        for (const char* name : {"twothree", "ring35"}) {
            const auto scheme = make_scheme(name, 3);
            for (int k = 0; k < 20; ++k) {
                const auto alpha = random_alpha(cq_audit_family_size(scheme), rng);
                const auto a = cq_audit_security(scheme, alpha);
                worst = std::max({worst, a.product_distance, a.dealer_distance});
            }
        }
        std::ostringstream os;
        os << "40 random alpha, max trace distance " << worst;
        return Outcome{worst < 1e-10, os.str()};
    });

    criterion(10, "qq teleportation", [] {
        Rng rng(10);
        double worst_f = 1, worst_p = 0;
        for (const char* name : {"tree", "twothree", "ring35"}) {
            const std::uint32_t d = 3;
            const auto scheme = make_scheme(name, d);
            const auto secret = random_secret(d, rng);
            const auto direct = encoded_quantum_secret(scheme, secret);
            for (std::uint32_t m = 0; m < d; ++m)
                for (std::uint32_t n = 0; n < d; ++n) {
                    const auto deal = qq_deal_outcome(scheme, secret, FieldElement(m, d), FieldElement(n, d));
                    worst_f = std::min(worst_f, fidelity(deal.corrected, direct));
                    worst_p = std::max(worst_p, std::abs(deal.probability - 1.0 / (d * d)));
                }
        }
        std::ostringstream os;
        os << "min fidelity " << format_real(worst_f, 12) << ", max |p - 1/d^2| " << worst_p;
        return Outcome{worst_f >= 1 - 1e-10 && worst_p < 1e-10, os.str()};
    });

    criterion(11, "qq perfect thresholds", [] {
        Rng rng(11);
        double worst_f = 1, worst_td = 0;
        bool shape = true;
        for (const char* name : {"twothree", "ring35"}) {
            const auto scheme = make_scheme(name, 3);
            for (const auto& sub : all_player_subsets(scheme.player_count())) {
                const bool authorised = sub.size() >= scheme.threshold;
                shape = shape && qq_authorized(scheme, sub) == authorised;
                if (sub.size() == scheme.threshold) {
                    const auto secret = random_secret(3, rng);
                    const auto enc = encoded_quantum_secret(scheme, secret);
                    worst_f = std::min(worst_f, qq_recover(scheme, enc, sub, secret, rng.next()).fidelity);
                } else if (sub.size() == scheme.threshold - 1) {
                    worst_td = std::max(worst_td, qq_audit_denial(scheme, sub));
                }
            }
        }
        std::ostringstream os;
        os << "min fidelity " << format_real(worst_f, 12) << ", max denied probe trace distance " << worst_td;
        return Outcome{shape && worst_f >= 1 - 1e-10 && worst_td < 1e-10, os.str()};
    });

    criterion(12, "qq (n,n) imperfection", [] {
        const std::uint32_t d = 3;
        const auto scheme = make_scheme("tree", d, 3);
        Rng rng(12);
        double leak = 0;
        for (const auto& sub : all_player_subsets(3))
            if (sub.size() == 2) leak = std::max(leak, qq_audit_denial(scheme, sub));
        const auto secret = random_secret(d, rng);
        const auto enc = encoded_quantum_secret(scheme, secret);
        const double full = qq_recover(scheme, enc, {1, 2, 3}, secret, 1).fidelity;
        double iso = 1;
        for (int target = 1; target <= 3; ++target)
            iso = std::min(iso, qq_isolate(scheme, enc, target, secret, 2).fidelity);
        std::ostringstream os;
        os << "max 2-subset probe trace distance " << format_real(leak, 4) << ", full-set fidelity "
           << format_real(full, 12) << ", min isolation fidelity " << format_real(iso, 12);
        return Outcome{leak > 0.01 && full >= 1 - 1e-10 && iso >= 1 - 1e-10, os.str()};
    });

    criterion(13, "reproducible transcripts", [] {
        const auto dir = std::filesystem::temp_directory_path() / "qss_acceptance";
        std::filesystem::create_directories(dir);
        const std::vector<std::string> commands{
            "run cc --scheme ring35 --d 5 --secret 2 --subset 1,2,4 --mode oracle --seed 13",
            "run cq --scheme twothree --d 3 --rounds 300 --seed 13 --eavesdrop",
            "run cq --scheme ring35 --d 3 --rounds 300 --seed 13",
            "run qq --scheme tree --d 3 --subset 1,2,3 --seed 13",
        };
        bool pass = true;
        std::size_t bytes = 0;
        for (std::size_t k = 0; k < commands.size(); ++k) {
            const auto a = dir / ("a" + std::to_string(k)), b = dir / ("b" + std::to_string(k));
            const int ca = run_cli(commands[k] + " --out '" + a.string() + "'");
            const int cb = run_cli(commands[k] + " --out '" + b.string() + "'");
            const auto ta = slurp(a), tb = slurp(b);
            pass = pass && ca == 0 && cb == 0 && !ta.empty() && ta == tb;
            bytes += ta.size();
        }
        std::filesystem::remove_all(dir);
        return Outcome{pass, std::to_string(commands.size()) + " commands run twice, " + std::to_string(bytes) +
                                 " transcript bytes compared"};
    });

    std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criteria failed\n"
                           : std::string("acceptance: all 13 criteria pass\n"));
    return failures ? 1 : 0;
}
