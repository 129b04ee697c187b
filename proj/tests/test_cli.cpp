#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// Drives the installed binary end to end through a shell. SPECEDGE_CLI_PATH
// is injected by the build; stderr is dropped, stdout (the JSON report) is
// captured, and the exit status comes back through pclose.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SPECEDGE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json parse_report(const RunResult& r) {
    auto j = nlohmann::json::parse(r.out);
    // Schema: the five top-level keys are always present.
    for (const char* k : {"system", "command", "result", "policy", "diagnostics"})
        REQUIRE(j.contains(k));
    return j;
}

std::string tmp_path(const std::string& stem) {
    return "/tmp/specedge_cli_" + stem;
}

} // namespace

TEST_CASE("classify reports verdicts with documented exit codes", "[cli]") {
    auto osc = run_cli("classify --family power_tail --c 1 --p 2 --t 1");
    CHECK(osc.exit_code == 0);
    auto j = parse_report(osc);
    CHECK(j["command"] == "classify");
    CHECK(j["result"]["verdict"] == "oscillatory");

    auto non = run_cli("classify --family zero_phi --t 5");
    CHECK(non.exit_code == 0);
    CHECK(parse_report(non)["result"]["verdict"] == "non_oscillatory");
}

TEST_CASE("classify on the coupled family records its routing", "[cli]") {
    auto r = run_cli("classify --family section5 --t 1");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["verdict"] == "oscillatory");
    CHECK(j["diagnostics"]["trace_normalized"] == true);
    CHECK(j["diagnostics"]["aligned_form_used"].is_string());
}

TEST_CASE("classify without certificates exits 3 on the open band", "[cli]") {
    auto r = run_cli("classify --family power_tail --c 1 --p 2 --t 0.52 "
                     "--no-certs --x-max 1000");
    CHECK(r.exit_code == 3);
    auto j = parse_report(r);
    CHECK(j["result"]["verdict"] == "inconclusive");
    CHECK(j["policy"]["use_certificates"] == false);
}

TEST_CASE("estimate brackets the edge", "[cli]") {
    auto r = run_cli("estimate --family section5 --x-max 1e14 --resolution 0.1");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    double lo = j["result"]["m"]["lo"].get<double>();
    double hi = j["result"]["m"]["hi"].get<double>();
    CHECK(lo <= 0.25);
    CHECK(0.25 <= hi);

    // Empty essential spectrum comes out as a structural sentinel, not a
    // huge number.
    auto z = run_cli("estimate --family zero_phi");
    CHECK(z.exit_code == 0);
    auto jz = parse_report(z);
    CHECK(jz["result"]["m"]["infinite"] == true);
    CHECK(jz["result"]["zero_in_ess"] == "no");
}

TEST_CASE("bounds runs the full consistency pipeline", "[cli]") {
    auto r = run_cli("bounds --family power_tail --c 1 --p 2");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["tail"]["A_hat"] == 1.0);
    CHECK(j["result"]["tail"]["B_hat"] == 1.0);
    CHECK(j["result"]["limsup_interval"]["lo"].get<double>() == 0.5);
    CHECK(j["result"]["limsup_interval"]["hi"].get<double>() == 1.0);
    CHECK(j["result"]["liminf_upper"].get<double>() == 0.5);
    CHECK(j["result"]["all_pass"] == true);
    CHECK(j["result"]["s_bracket"]["kind"] == "bracket");
    double s_lo = j["result"]["s_bracket"]["interval"]["lo"].get<double>();
    double s_hi = j["result"]["s_bracket"]["interval"]["hi"].get<double>();
    CHECK(s_lo <= 0.55);
    CHECK(s_hi >= 0.45);
}

TEST_CASE("bounds on the coupled family records the edge ratio", "[cli]") {
    auto r = run_cli("bounds --family section5 --x-max 1e14 --resolution 0.1");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["all_pass"] == true);
    REQUIRE(j["result"].contains("ratio_full_over_diagonal"));
    double rhi = j["result"]["ratio_full_over_diagonal"]["hi"].get<double>();
    CHECK(rhi < 2.6180339887498949); // strictly below the sandwich constant
}

TEST_CASE("schrodinger probe verdicts", "[cli]") {
    auto fin = run_cli("schrodinger --family power_tail --c 1 --p 2 --t 0.4");
    CHECK(fin.exit_code == 0);
    CHECK(parse_report(fin)["result"]["verdict"] == "finite");

    auto inf = run_cli("schrodinger --family power_tail --c 1 --p 2 --t 1.0");
    CHECK(inf.exit_code == 0);
    auto j = parse_report(inf);
    CHECK(j["result"]["verdict"] == "infinite");
    CHECK(!j["result"]["zero_counts"].empty());
}

TEST_CASE("trace writes the angle trajectory as CSV", "[cli]") {
    std::string csv = tmp_path("angle.csv");
    auto r = run_cli("trace --family constant_H --t 1 --x-max 6.283185307179586 --out " + csv);
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["mode"] == "angle");

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line, last;
    std::getline(in, line);
    CHECK(line == "x,theta");
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    auto comma = last.find(',');
    REQUIRE(comma != std::string::npos);
    double theta_end = std::stod(last.substr(comma + 1));
    // Constant diag(1/2,1/2) advances the angle at rate t/2: half a turn
    // over one period.
    CHECK(std::abs(theta_end - 3.14159265358979323846) < 1e-6);
    std::remove(csv.c_str());
}

TEST_CASE("trace exports zero counts", "[cli]") {
    std::string csv = tmp_path("counts.csv");
    auto r = run_cli("trace --family power_tail --c 1 --p 2 --t 1 --counts "
                     "--x-max 1e6 --out " + csv);
    CHECK(r.exit_code == 0);
    CHECK(parse_report(r)["result"]["final_count"] == 3);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "X,count");
    std::remove(csv.c_str());
}

TEST_CASE("config file feeds flags and flags override it", "[cli]") {
    std::string cfg = tmp_path("cfg.json");
    {
        std::ofstream out(cfg);
        out << R"({"family": "power_tail", "c": 1.0, "p": 2.0, "t": 1.0})";
    }
    auto r = run_cli("classify --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(parse_report(r)["result"]["verdict"] == "oscillatory");

    // Command line wins over the file.
    auto r2 = run_cli("classify --config " + cfg + " --t 0.3");
    CHECK(r2.exit_code == 0);
    CHECK(parse_report(r2)["result"]["verdict"] == "non_oscillatory");

    // Stdin works as a config source.
    auto r3 = run_cli("classify --config - < " + cfg);
    CHECK(r3.exit_code == 0);
    CHECK(parse_report(r3)["result"]["verdict"] == "oscillatory");

    // Unknown config fields are rejected, same as unknown flags.
    std::string bad = tmp_path("bad.json");
    {
        std::ofstream out(bad);
        out << R"({"family": "power_tail", "t": 1.0, "horizon": 99})";
    }
    CHECK(run_cli("classify --config " + bad).exit_code == 2);
    std::remove(cfg.c_str());
    std::remove(bad.c_str());
}

TEST_CASE("grid CSV systems classify exactly", "[cli]") {
    std::string grid = tmp_path("grid.csv");
    {
        std::ofstream out(grid);
        out << "x,phi,g\n0,0.9,0\n2,0.4,0\n5,0,0\n";
    }
    auto r = run_cli("classify --grid " + grid + " --t 1");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["verdict"] == "non_oscillatory");
    CHECK(j["result"]["exact_grid"] == true);
    CHECK(j["system"]["source"] == "grid");
    std::remove(grid.c_str());
}

TEST_CASE("deterministic reruns are byte-identical", "[cli]") {
    std::string args = "bounds --family power_tail --c 1 --p 2 --deterministic";
    auto a = run_cli(args);
    auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    REQUIRE(!a.out.empty());
    CHECK(a.out == b.out);
}

TEST_CASE("config errors exit 2, I/O errors exit 5", "[cli]") {
    CHECK(run_cli("classify --family power_tail --bogus 1 --t 1").exit_code == 2);
    CHECK(run_cli("classify --family no_such_family --t 1").exit_code == 2);
    CHECK(run_cli("classify --family power_tail").exit_code == 2); // missing --t
    CHECK(run_cli("classify --t 1").exit_code == 2);               // no system
    std::string grid = tmp_path("both.csv");
    {
        std::ofstream out(grid);
        out << "x,phi,g\n0,0.5,0\n";
    }
    CHECK(run_cli("classify --family zero_phi --grid " + grid + " --t 1").exit_code == 2);
    std::remove(grid.c_str());

    CHECK(run_cli("trace --family zero_phi --t 1 --out /no_such_dir_zz/x.csv").exit_code == 5);
    CHECK(run_cli("classify --grid /no_such_dir_zz/in.csv --t 1").exit_code == 5);
}

TEST_CASE("verify subcommand runs the acceptance suite", "[cli]") {
    auto r = run_cli("verify --deterministic");
    CHECK(r.exit_code == 0);
    auto j = parse_report(r);
    CHECK(j["result"]["all_pass"] == true);
    REQUIRE(j["result"]["criteria"].size() == 9);
    for (const auto& c : j["result"]["criteria"]) {
        CHECK(c["pass"] == true);
        CHECK(!c.contains("seconds"));
    }
}
