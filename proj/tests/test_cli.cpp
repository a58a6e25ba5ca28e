#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = QSS_CLI_PATH;
const std::string kFixtures = QSS_FIXTURE_DIR;

struct Run {
    int code;
    std::string out;
};

// stdout and stderr together
Run run(const std::string& args) {
    const std::string cmd = "'" + kCli + "' " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("cli: cc run") {
    const auto r = run("run cc --scheme twothree --d 5 --secret 3 --subset 2,3");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "recovered 3"));
    const auto denied = run("run cc --scheme ring34 --d 3 --secret 1 --subset 1,3");
    CHECK(denied.code == 0);
    CHECK(contains(denied.out, "denied, certificate"));
}

TEST_CASE("cli: cq and qq runs") {
    const auto cq = run("run cq --scheme ring35 --d 3 --rounds 200 --seed 4");
    CHECK(cq.code == 0);
    CHECK(contains(cq.out, "mismatches 0"));
    const auto qq = run("run qq --scheme twothree --d 3 --secret 0.6,0.8,0 --subset 1,3");
    CHECK(qq.code == 0);
    CHECK(contains(qq.out, "fidelity 1.000000"));
}

TEST_CASE("cli: transcripts are reproducible") {
    const auto dir = std::filesystem::temp_directory_path() / "qss_cli_test";
    std::filesystem::create_directories(dir);
    const auto a = dir / "a.txt", b = dir / "b.txt";
    CHECK(run("run cq --scheme twothree --d 3 --rounds 150 --seed 9 --eavesdrop --out '" + a.string() + "'").code == 0);
    CHECK(run("run cq --scheme twothree --d 3 --rounds 150 --seed 9 --eavesdrop --out '" + b.string() + "'").code == 0);
    CHECK(!slurp(a).empty());
    CHECK(slurp(a) == slurp(b));
    std::filesystem::remove_all(dir);
}

TEST_CASE("cli: graph commands") {
    const auto show = run("graph show '" + kFixtures + "/five_vertex_d7.graph'");
    CHECK(show.code == 0);
    CHECK(contains(show.out, "d=7 n=5"));
    const auto m = run("graph measure '" + kFixtures + "/measured_square_d5.graph' 1 --basis X2Z --outcome 2 --raw");
    CHECK(m.code == 0);
    CHECK(contains(m.out, "reduced state matches"));
    CHECK(contains(m.out, "edge 1 2 3"));  // ids renumbered 2,3,4 -> 1,2,3
    const auto s = run("graph shuffle '" + kFixtures + "/shuffle_square_d5.graph' 1 2");
    CHECK(s.code == 0);
    CHECK(contains(s.out, "z=(0,0,2,0) x=(0,1,0,0)"));
}

TEST_CASE("cli: verify") {
    const auto r = run("verify field --seed 1");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "0 failed"));
    CHECK(run("verify nonsense").code == 2);
}

TEST_CASE("cli: errors") {
    auto r = run("run cc --scheme bogus --subset 1");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "error usage:"));
    r = run("graph show /nonexistent/file.graph");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "error io:"));
    r = run("run qq --scheme twothree --d 3 --secret 1,0 --subset 1,2");
    CHECK(r.code == 2);
    r = run("run cc --d 4 --secret 1 --subset 1");
    CHECK(r.code == 2);
    r = run("run qq --scheme ring34 --subset 1,2,3");
    CHECK(r.code == 2);
    r = run("--frobnicate");
    CHECK(r.code == 2);
    r = run("run cc --subset 1 --secret x");
    CHECK(r.code == 2);
}

TEST_CASE("cli: parse errors report the line") {
    const auto path = std::filesystem::temp_directory_path() / "qss_bad.graph";
    {
        std::ofstream f(path);
        f << "d 5\nn 2\nedge 1 2 1\nedge 1 9 1\n";
    }
    const auto r = run("graph show '" + path.string() + "'");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "error parse:"));
    CHECK(contains(r.out, "line 4"));
    std::filesystem::remove(path);
}
