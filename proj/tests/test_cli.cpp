#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::current_path() / "cli_work";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run(const std::string& args) {
    const auto log = workdir() / "stdout.txt";
    const std::string cmd = "cd '" + workdir().string() + "' && '" GOSSIPLAB_CLI_PATH "' " + args + " > '" +
                            log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(workdir() / p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Data rows of a CSV file: lines after the comment header and the column header.
std::vector<std::vector<std::string>> rows(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::vector<std::vector<std::string>> out;
    bool header_seen = false;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        out.push_back(cells);
    }
    return out;
}

double value_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST_CASE("generate prints a summary and writes the graph") {
    const auto r = run("generate --n 16 --seed 7 --out g1");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("radius=0.5887") != std::string::npos);
    CHECK(r.out.find("strongly_connected=yes") != std::string::npos);
    CHECK(r.out.find("xi2=") != std::string::npos);
    CHECK(r.out.find("xi_n=") != std::string::npos);
    const auto text = slurp("g1/graph.txt");
    CHECK(text.rfind("# gossiplab 0.1.0\n", 0) == 0);
    CHECK(text.find("\nn 16\n") != std::string::npos);
}

TEST_CASE("generate is deterministic and handles two nodes") {
    REQUIRE(run("generate --n 16 --p-asym 0.3 --seed 7 --out g2").code == 0);
    REQUIRE(run("generate --n 16 --p-asym 0.3 --seed 7 --out g3").code == 0);
    CHECK(slurp("g2/graph.txt") == slurp("g3/graph.txt"));

    const auto r = run("generate --n 2 --out g4");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("edges=2") != std::string::npos);
}

TEST_CASE("analyze evaluates the closed-form bounds") {
    const auto r = run("analyze --n 16 --xi-n 1.3796 --xi2 0.5335");
    REQUIRE(r.code == 0);
    CHECK(std::abs(value_after(r.out, "eta") - 29.30) <= 0.01);
    CHECK(std::abs(value_after(r.out, "epsilon_star") - 0.2668) <= 1e-4);
}

TEST_CASE("analyze writes json and csv reports") {
    REQUIRE(run("generate --n 12 --seed 3 --out a0").code == 0);
    const auto r = run("analyze --graph a0/graph.txt --out a1");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp("a1/report.json"));
    CHECK(j["header"]["tool"] == "gossiplab");
    CHECK(j["expectation"]["spectrum"].size() == 24);
    CHECK(j["expectation"]["is_simple_one"] == true);
    CHECK(j["epsilon"]["eta"].is_number());
    const auto csv = rows("a1/report.csv");
    REQUIRE(csv.size() == 1);
    CHECK(csv[0][2] == "true");

    const auto c = run("analyze --graph a0/graph.txt --scheme classic --out a2");
    REQUIRE(c.code == 0);
    const auto jc = nlohmann::json::parse(slurp("a2/report.json"));
    CHECK(jc["epsilon"].is_null());
    CHECK(jc.contains("note"));
}

TEST_CASE("analyze second-moment check") {
    const auto r = run("analyze --n 8 --epsilon 0.2 --check second-moment --out a3");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("rho<1: PASS") != std::string::npos);
    CHECK(run("analyze --n 30 --epsilon 0.2 --check second-moment --out a4").code == 3);
}

TEST_CASE("sweep defaults and single-point grid") {
    REQUIRE(run("generate --n 16 --seed 11 --out s0").code == 0);
    REQUIRE(run("sweep --graph s0/graph.txt --trials 10 --out s1").code == 0);
    const auto pts = rows("s1/sweep.csv");
    REQUIRE(pts.size() == 50);
    CHECK(pts[0].size() == 7);
    CHECK(pts[0][5] == "10");

    // The analytic column bottoms out at the grid point nearest xi2 / 2.
    const auto a = run("analyze --graph s0/graph.txt --out s2");
    const double xi2 = value_after(a.out, "xi2");
    std::size_t best = 0, nearest = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (std::stod(pts[i][6]) < std::stod(pts[best][6])) best = i;
        if (std::abs(std::stod(pts[i][0]) - xi2 / 2) < std::abs(std::stod(pts[nearest][0]) - xi2 / 2)) nearest = i;
    }
    CHECK(best == nearest);

    REQUIRE(run("sweep --n 8 --grid 0.5 --trials 3 --out s3").code == 0);
    CHECK(rows("s3/sweep.csv").size() == 1);
}

TEST_CASE("simulate writes one trajectory per scheme") {
    const auto r = run("simulate --schemes classic,ubga1,bbga --init spike --n 50 --trials 100 --svg c.svg --out m1");
    REQUIRE(r.code == 0);
    for (const char* name : {"classic", "ubga1", "bbga"}) {
        const auto traj = rows(fs::path("m1") / (std::string("trajectory_") + name + ".csv"));
        CHECK(traj.size() > 2);
    }
    CHECK(slurp("m1/c.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("simulate output can be replayed from its header") {
    std::ofstream(workdir() / "cfg.txt") << "n=10\nseed=4\ntrials=6\nschemes=ubga2,bbga@0.4\ninit=gaussian\n";
    REQUIRE(run("simulate --config cfg.txt --out r1").code == 0);
    CHECK(slurp("r1/trajectory_ubga2.csv").find("# trials=6\n") != std::string::npos);
    REQUIRE(run("simulate --config r1/trajectory_bbga_0.4.csv --out r2").code == 0);
    CHECK(slurp("r1/trajectory_bbga_0.4.csv") == slurp("r2/trajectory_bbga_0.4.csv"));
    CHECK(slurp("r1/trials_bbga_0.4.csv") == slurp("r2/trials_bbga_0.4.csv"));
}

TEST_CASE("exit codes") {
    CHECK(run("analyze --scheme nope --n 8").code == 2);
    CHECK(run("simulate --n 8 --epsilon banana --out x").code == 2);
    CHECK(run("bogus").code == 2);
    CHECK(run("generate --n 40 --radius 0.01 --out x").code == 4);
    CHECK(run("simulate --graph missing.txt --out x").code == 2);
    // A diverging campaign is surfaced as a numerical failure.
    CHECK(run("simulate --n 16 --schemes bbga@auto-eta-fraction:0.5 --trials 4 --out x").code == 3);
}
