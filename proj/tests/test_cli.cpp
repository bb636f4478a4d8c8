#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& stdout_file = "/dev/null") {
    const std::string cmd =
        std::string("\"") + BETAIMEX_CLI + "\" " + args + " > \"" + stdout_file.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

fs::path fresh(const std::string& name) {
    const fs::path d = fs::current_path() / ("cli_" + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_CASE("coefficient printout") {
    const auto d = fresh("coeffs");
    fs::create_directories(d);
    CHECK(run_cli("coeffs --k 2 --beta 3 --json", d / "out.txt") == 0);
    const auto text = slurp(d / "out.txt");
    CHECK(text.find("\"a\"") != std::string::npos);
    CHECK(run_cli("coeffs --k 2 --beta 3 --exact --csv", d / "exact.txt") == 0);
    CHECK(slurp(d / "exact.txt").find("a,2,7/2") != std::string::npos);
}

TEST_CASE("exit codes") {
    const auto d = fresh("codes");
    CHECK(run_cli("coeffs --k 7 --beta 2") == 1);
    CHECK(run_cli("coeffs --k 2 --beta 0.5") == 1);
    CHECK(run_cli("no-such-command") == 1);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("verify --k 4 --beta 2 --out " + (d / "ok").string()) == 0);
    CHECK(run_cli("verify --k 4 --beta 1 --out " + (d / "bad").string()) == 2);
    CHECK(fs::exists(d / "bad" / "certificates.json"));
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("reruns are byte-identical") {
    // same output directory both times, since the manifest echoes it
    const auto d = fresh("det");
    auto snapshot = [&](const std::string& args, const std::vector<std::string>& files) {
        REQUIRE(run_cli(args + " --out " + d.string()) == 0);
        std::vector<std::string> out;
        for (const auto& f : files) {
            REQUIRE(fs::exists(d / f));
            out.push_back(slurp(d / f));
        }
        fs::remove_all(d);
        return out;
    };
    const std::string stab = "stability --k 3 --beta 2 --res 40,30 --window -6,2,-4,4";
    const std::vector<std::string> sf{"stability.pgm", "stability.json", "manifest.json"};
    CHECK(snapshot(stab, sf) == snapshot(stab, sf));
    const std::string ch = "cahn-hilliard --small --n 16 --T 2e-4 --k 3 --beta 3";
    const std::vector<std::string> cf{"energy.csv", "summary.json", "final_field.bin", "manifest.json"};
    CHECK(snapshot(ch, cf) == snapshot(ch, cf));
}

TEST_CASE("configuration file feeds subcommand options") {
    const auto d = fresh("config");
    fs::create_directories(d);
    {
        std::ofstream os(d / "run.json");
        os << R"({"out": ")" << (d / "result").string() << R"(", "verify": {"k": 3, "grid": "1:3:0.5"}})";
    }
    CHECK(run_cli("--config " + (d / "run.json").string() + " verify") == 0);
    const auto certs = slurp(d / "result" / "certificates.json");
    CHECK(certs.find("\"beta\": 2.5") != std::string::npos);
    CHECK(slurp(d / "result" / "manifest.json").find("1:3:0.5") != std::string::npos);
}
