// Acceptance driver: one PASS/FAIL line per criterion, details indented below.
// Criteria 1-9 come from the invariant suites; criterion 10 drives the built
// command-line tool.

#include "nslab/checks.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Detail {
    bool ok;
    std::string text;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

class CliProbe {
public:
    CliProbe() : work_(fs::temp_directory_path() / "nslab_acceptance") {
        fs::remove_all(work_);
        fs::create_directories(work_);
    }

    int run(const std::string& args, const std::string& tag) {
        return shell(quoted(NSLAB_CLI_PATH) + " " + args + " > " + quoted(work_ / (tag + ".out")) + " 2> " +
                     quoted(work_ / (tag + ".err")));
    }

    std::string out(const std::string& tag) const { return slurp(work_ / (tag + ".out")); }
    fs::path dir(const std::string& tag) const { return work_ / tag; }

private:
    fs::path work_;
};

std::string config(const std::string& name) { return quoted(fs::path(NSLAB_CONFIG_DIR) / name); }

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
    size_t other = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++other;
    if (names.empty() || names.size() != other) {
        why = "file sets differ";
        return false;
    }
    for (const std::string& n : names) {
        if (slurp(a / n) != slurp(b / n)) {
            why = n + " differs";
            return false;
        }
    }
    return true;
}

// Every numeric CSV cell must be the %.17g rendering of the value it parses to.
bool seventeen_digits(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    char buf[40];
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            std::snprintf(buf, sizeof buf, "%.17g", std::strtod(cell.c_str(), nullptr));
            if (cell != buf) return false;
        }
    }
    return true;
}

std::vector<Detail> criterion_10() {
    std::vector<Detail> d;
    CliProbe cli;

    for (const char* name : {"flat_circle.json", "linear_index_modified.json", "linear_index_hamilton.json",
                             "linear_index_newtonian.json", "sphere_latitude.json", "wavefront_w.json"}) {
        const std::string stem = fs::path(name).stem().string();
        const int a = cli.run("simulate --config " + config(name) + " --out " + quoted(cli.dir(stem + "_a")), stem + "_a");
        const int b = cli.run("simulate --config " + config(name) + " --out " + quoted(cli.dir(stem + "_b")), stem + "_b");
        std::string why = "exit codes " + std::to_string(a) + ", " + std::to_string(b);
        const bool ok = a == 0 && b == 0 && same_tree(cli.dir(stem + "_a"), cli.dir(stem + "_b"), why);
        d.push_back({ok, "simulate " + std::string(name) + " twice: byte-identical outputs" + (ok ? "" : " (" + why + ")")});
    }

    const std::string flat = slurp(cli.dir("flat_circle_a") / "fronts.csv");
    const bool header = flat.rfind("t,sample_index,q1,x1,x2,N1,N2,nu,phase\n", 0) == 0;
    d.push_back({header, "fronts.csv column order t, sample_index, q, x, N, nu, phase"});
    d.push_back({seventeen_digits(flat) && seventeen_digits(slurp(cli.dir("flat_circle_a") / "trajectories.csv")),
                 "CSV numbers printed with 17 significant digits"});

    const int n1 = cli.run("nu --config " + config("flat_circle.json"), "nu_a");
    const int n2 = cli.run("nu --config " + config("flat_circle.json"), "nu_b");
    d.push_back({n1 == 0 && n2 == 0 && cli.out("nu_a") == cli.out("nu_b") && !cli.out("nu_a").empty(),
                 "nu report reproducible"});
    const std::string grid = "--grid x1=-1:1:5,x2=0.3:0.3:1,u1=0.5:1.5:3,u2=-0.5:0.5:3";
    const int f1 = cli.run("derive-force --config " + config("wavefront_w.json") + " " + grid, "force_a");
    const int f2 = cli.run("derive-force --config " + config("wavefront_w.json") + " " + grid, "force_b");
    d.push_back({f1 == 0 && f2 == 0 && cli.out("force_a") == cli.out("force_b") && !cli.out("force_a").empty(),
                 "derive-force table reproducible"});

    const int both = cli.run("simulate --config " + config("both_sources.json") + " --out " + quoted(cli.dir("both")), "both");
    d.push_back({both == 1 && !fs::exists(cli.dir("both")), "two dynamics sources: schema error, exit 1, no output"});
    const int none = cli.run("simulate --config " + config("no_nu.json") + " --out " + quoted(cli.dir("none")), "none");
    d.push_back({none == 2, "H = |p|^2 + 1: no admissible nu, exit 2"});
    const int missing = cli.run("nu --config " + config("missing.json"), "missing");
    d.push_back({missing == 3, "unreadable config: exit 3"});

    const int all = cli.run("check --suite all", "check_all");
    const std::string report = cli.out("check_all");
    bool covered = true;
    for (int k = 1; k <= 9; ++k) covered = covered && report.find("criterion " + std::to_string(k) + ":") != std::string::npos;
    d.push_back({all == 0 && covered, "check --suite all covers criteria 1-9 and exits 0"});
    const int bad = cli.run("check --suite config --config " + quoted(NSLAB_VIOLATION_CONFIG), "check_bad");
    d.push_back({bad != 0 && cli.out("check_bad").find("[FAIL]") != std::string::npos,
                 "check exits nonzero on a violated invariant"});
    return d;
}

} // namespace

int main() {
    std::map<int, std::vector<Detail>> by_criterion;
    for (const nslab::SuiteResult& suite : nslab::run_suites("all"))
        for (const nslab::CheckLine& line : suite.lines)
            by_criterion[line.criterion].push_back({line.passed || line.informational, nslab::format_line(line)});
    by_criterion[10] = criterion_10();

    static const char* titles[] = {"",
                                   "front coincidence",
                                   "normality preservation",
                                   "form equivalence",
                                   "first integral",
                                   "h = 0 coincidence",
                                   "Legendre suite",
                                   "transport operator",
                                   "gradient checks",
                                   "integrator order",
                                   "CLI determinism and format"};
    bool all_ok = true;
    for (int k = 1; k <= 10; ++k) {
        const auto& details = by_criterion[k];
        bool ok = !details.empty();
        for (const Detail& d : details) ok = ok && d.ok;
        all_ok = all_ok && ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << k << ": " << titles[k] << "\n";
        for (const Detail& d : details) std::cout << "        " << (d.ok ? "" : "!! ") << d.text << "\n";
    }
    if (by_criterion.count(0)) {
        all_ok = false;
        for (const Detail& d : by_criterion[0]) std::cout << "FAIL  " << d.text << "\n";
    }
    std::cout << (all_ok ? "acceptance: all criteria passed" : "acceptance: failures present") << std::endl;
    return all_ok ? 0 : 1;
}
