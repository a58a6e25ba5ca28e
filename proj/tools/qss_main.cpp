// qss: verify suites, protocol runs and graph rewrites from the command line.
//
// Exit codes: 0 ok, 1 an assertion or audit failed, 2 usage error,
// 3 I/O or parse error. Errors are one line: `error <code>: <message>`.

#include "qss/errors.hpp"
#include "qss/graph.hpp"
#include "qss/oracle.hpp"
#include "qss/protocols.hpp"
#include "qss/rewrite.hpp"
#include "qss/schemes.hpp"
#include "qss/transcript.hpp"
#include "qss/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kIo = 3 };

// Bad flag combinations found after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int fail(const char* code, const std::string& msg, int exit_code) {
    std::string flat = msg;
    for (auto& c : flat)
        if (c == '\n') c = ' ';
    std::cerr << "error " << code << ": " << flat << "\n";
    return exit_code;
}

struct RunOptions {
    std::string kind;
    std::string scheme = "tree";
    std::size_t n = 3;
    std::uint32_t d = 3;
    std::optional<std::string> secret;
    std::optional<std::string> subset;
    std::size_t rounds = 1000;
    std::uint64_t seed = 0;
    bool eavesdrop = false;
    std::string mode = "symbolic";
    double sacrifice = 0.5;
    std::optional<std::string> out;
};

struct GraphOptions {
    std::string action;
    std::string file;
    int vertex = 0;
    int neighbour = 0;
    std::string basis = "Z";
    std::int64_t outcome = 0;
    bool raw = false;
};

// `0.6,0.8` or `1:0,0:1` (re:im) -> amplitudes.
std::vector<qss::Amplitude> parse_amplitudes(const std::string& text) {
    std::vector<qss::Amplitude> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            std::size_t used = 0;
            const double re = std::stod(item.substr(0, colon), &used);
            if (used != item.substr(0, colon).size()) throw std::invalid_argument(item);
            double im = 0;
            if (colon != std::string::npos) {
                const auto rest = item.substr(colon + 1);
                im = std::stod(rest, &used);
                if (used != rest.size()) throw std::invalid_argument(item);
            }
            out.emplace_back(re, im);
        } catch (const std::logic_error&) {
            throw UsageError("malformed amplitude '" + item + "'");
        }
    }
    return out;
}

std::int64_t parse_dit(const std::string& text) {
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError("cc needs a single dit secret, got '" + text + "'");
    return v;
}

void emit(const std::string& text, const std::optional<std::string>& path) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + *path + "'");
    f << text;
    if (!f) throw IoError("write to '" + *path + "' failed");
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
    const auto report = qss::run_suite(suite, seed);
    std::cout << report.render();
    std::size_t failed = 0;
    for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
    std::cout << "verify " << suite << " seed " << seed << ": " << report.checks.size() << " checks, " << failed
              << " failed\n";
    return failed ? kFailed : kOk;
}

int cmd_run(const RunOptions& o) {
    const auto kind = qss::parse_scheme_kind(o.kind);
    const auto scheme = qss::make_scheme(o.scheme, o.d, o.n);
    if (!scheme.supports(kind)) throw UsageError("scheme " + o.scheme + " has no " + o.kind + " protocol");

    qss::RunResult result;
    switch (kind) {
    case qss::SchemeKind::CC: {
        if (!o.subset) throw UsageError("run cc needs --subset");
        if (o.mode != "symbolic" && o.mode != "oracle") throw UsageError("--mode must be symbolic or oracle");
        qss::FieldElement s = qss::FieldElement::zero(o.d);
        if (o.secret) {
            s = qss::FieldElement(parse_dit(*o.secret), o.d);
        } else {
            qss::Rng rng(o.seed);
            s = qss::FieldElement(static_cast<std::int64_t>(rng.below(o.d)), o.d);
        }
        const auto mode = o.mode == "oracle" ? qss::RecoveryMode::Oracle : qss::RecoveryMode::Symbolic;
        result = qss::run_cc(scheme, s, qss::parse_id_list(*o.subset), mode, o.seed);
        break;
    }
    case qss::SchemeKind::CQ: {
        if (o.secret) throw UsageError("run cq takes no --secret; the key comes from the dealer's outcomes");
        qss::CqConfig cfg;
        cfg.rounds = o.rounds;
        cfg.seed = o.seed;
        cfg.eavesdropper = o.eavesdrop ? qss::Eavesdropper::InterceptResend : qss::Eavesdropper::None;
        cfg.sacrifice = o.sacrifice;
        if (o.subset) cfg.authorized = qss::parse_id_list(*o.subset);
        result = qss::run_cq(scheme, cfg);
        break;
    }
    case qss::SchemeKind::QQ: {
        if (!o.subset) throw UsageError("run qq needs --subset");
        std::optional<qss::QuantumSecret> secret;
        if (o.secret) {
            auto amps = parse_amplitudes(*o.secret);
            if (amps.size() != o.d) {
                throw UsageError("qq needs " + std::to_string(o.d) + " amplitudes, got " + std::to_string(amps.size()));
            }
            secret = qss::make_secret(o.d, std::move(amps));
        }
        result = qss::run_qq(scheme, secret, qss::parse_id_list(*o.subset), o.seed);
        break;
    }
    }
    emit(result.transcript.render(), o.out);
    std::cout << result.summary << "\n";
    return result.ok ? kOk : kFailed;
}

int cmd_graph(const GraphOptions& o) {
    const auto g = qss::load_graph_file(o.file);
    qss::LabelledGraph out = g;
    std::string note;
    if (o.action == "show") {
        // nothing to do
    } else if (o.action == "shuffle") {
        out = qss::shuffle(g, g.index_of(o.vertex), g.index_of(o.neighbour));
        note = "# shuffled " + std::to_string(o.vertex) + "->" + std::to_string(o.neighbour) + "\n";
    } else if (o.action == "measure") {
        const std::size_t i = g.index_of(o.vertex);
        const auto basis = qss::parse_measurement_basis(o.basis, g.modulus());
        const qss::FieldElement s(o.outcome, g.modulus());
        out = qss::measure_symbolic(g, i, basis, s).reduced;
        std::ostringstream os;
        os << "# measured " << qss::to_string(basis) << " on " << o.vertex << ", outcome w^" << s << "\n";
        std::size_t dim = 1;
        for (std::size_t k = 0; k < g.size() && dim <= qss::kMaxAmplitudes; ++k) dim *= g.modulus();
        if (dim <= qss::kMaxAmplitudes) {
            const auto obs = qss::PauliOperator::local(g.size(), i, basis.x_exponent(), basis.z_exponent());
            const auto proj = qss::project(qss::build_graph_state(g), obs, s);
            const auto oracle = qss::drop_product_site(proj.state, i);
            const bool agree = qss::equal_up_to_global_phase(oracle, qss::build_graph_state(out));
            os << "# oracle: probability " << qss::format_real(proj.probability) << ", reduced state "
               << (agree ? "matches" : "DIFFERS") << "\n";
            if (!agree) {
                std::cout << os.str();
                return kFailed;
            }
        }
        note = os.str();
    } else {
        throw UsageError("unknown graph action '" + o.action + "' (expected show, measure or shuffle)");
    }
    std::cout << note << (o.raw ? qss::format_graph(out) : qss::pretty_print(out));
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qudit graph-state secret sharing"};
    app.require_subcommand(1);

    std::string suite = "all";
    std::uint64_t verify_seed = 0;
    auto* verify = app.add_subcommand("verify", "cross-check the symbolic engine against the dense oracle");
    verify->add_option("suite", suite, "all, field, pauli, graph, oracle or protocols");
    verify->add_option("--seed", verify_seed, "RNG seed");

    RunOptions run;
    auto* runc = app.add_subcommand("run", "run a cc, cq or qq protocol and write its transcript");
    runc->add_option("kind", run.kind, "cc, cq or qq")->required();
    runc->add_option("--scheme", run.scheme, "tree, twothree, ring34 or ring35");
    runc->add_option("--n", run.n, "players in the tree scheme");
    runc->add_option("--d", run.d, "odd prime dimension");
    runc->add_option("--secret", run.secret, "cc: a dit; qq: d amplitudes re[:im],...");
    runc->add_option("--subset", run.subset, "players, e.g. 1,2 (cq: the authorised set)");
    runc->add_option("--rounds", run.rounds, "cq rounds");
    runc->add_option("--seed", run.seed, "RNG seed");
    runc->add_flag("--eavesdrop", run.eavesdrop, "cq: intercept-resend on every dealer channel");
    runc->add_option("--mode", run.mode, "cc recovery: symbolic or oracle");
    runc->add_option("--sacrifice", run.sacrifice, "cq: fraction of kept rounds spent on verification");
    runc->add_option("--out", run.out, "transcript file (default stdout)");

    GraphOptions graph;
    auto* graphc = app.add_subcommand("graph", "show, measure or shuffle a labelled graph file");
    graphc->add_option("action", graph.action, "show, measure or shuffle")->required();
    graphc->add_option("file", graph.file, "graph description")->required();
    graphc->add_option("vertex", graph.vertex, "vertex id to measure, or to shuffle from");
    graphc->add_option("neighbour", graph.neighbour, "shuffle target");
    graphc->add_option("--basis", graph.basis, "Z or X^mZ, e.g. X2Z");
    graphc->add_option("--outcome", graph.outcome, "eigenvalue exponent s of the outcome w^s");
    graphc->add_flag("--raw", graph.raw, "print the file format instead of the table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kUsage);
    }

    try {
        if (*verify) return cmd_verify(suite, verify_seed);
        if (*runc) return cmd_run(run);
        if (graph.action != "show" && graph.vertex == 0) throw UsageError("graph " + graph.action + " needs a vertex");
        if (graph.action == "shuffle" && graph.neighbour == 0) throw UsageError("graph shuffle needs a neighbour");
        return cmd_graph(graph);
    } catch (const UsageError& e) {
        return fail("usage", e.what(), kUsage);
    } catch (const qss::ParseError& e) {
        return fail(e.line() == 0 ? "io" : "parse", e.what(), kIo);
    } catch (const IoError& e) {
        return fail("io", e.what(), kIo);
    } catch (const qss::DomainError& e) {
        return fail("usage", e.what(), kUsage);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kFailed);
    }
}
