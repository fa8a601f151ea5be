// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

// Runs the secres executable and checks its output contract.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int run(const std::string& args)
{
    const std::string cmd = std::string(SECRES_CLI_PATH) + " " + args;
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string without_wall_time(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("# wall_time_s:", 0) != 0) out += line + '\n';
    return out;
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "secres_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("repeated runs are byte identical except the timing line")
    {
        const fs::path a = scratch("c1.csv"), b = scratch("c2.csv");
        REQUIRE(run("periodic --n 7 > " + a.string()) == 0);
        REQUIRE(run("periodic --n 7 > " + b.string()) == 0);
        const std::string ta = slurp(a);
        CHECK(ta.find("# wall_time_s:") != std::string::npos);
        CHECK(ta.find("E,J,Gamma0,T0") != std::string::npos);
        CHECK(without_wall_time(ta).size() > 200);
        CHECK(without_wall_time(ta) == without_wall_time(slurp(b)));
    }

    TEST_CASE("data rows do not depend on the thread count")
    {
        const fs::path a = scratch("t1.csv"), b = scratch("t2.csv");
        REQUIRE(run("periodic --n 6 --emin 0 --emax 1e-6 > " + a.string()) == 0);
        REQUIRE(run("periodic --n 6 --emin 0 --emax 1e-6 --threads 2 > " + b.string()) == 0);
        auto rows = [](const std::string& text) {
            std::istringstream in(text);
            std::string line, out;
            while (std::getline(in, line))
                if (!line.empty() && line[0] != '#') out += line + '\n';
            return out;
        };
        CHECK(rows(slurp(a)) == rows(slurp(b)));
        CHECK(rows(slurp(a)).size() > 100);
    }

    TEST_CASE("constants and json output")
    {
        const fs::path a = scratch("k.json");
        REQUIRE(run("constants --json --out " + a.string()) == 0);
        const std::string t = slurp(a);
        CHECK(t.find("\"rows\"") != std::string::npos);
        CHECK(t.find("alpha") != std::string::npos);
    }

    TEST_CASE("configuration errors exit with status 2")
    {
        const fs::path cfg = scratch("bad.cfg");
        std::ofstream(cfg) << "no_such_constant = 3\n";
        CHECK(run("constants --config " + cfg.string() + " > /dev/null 2>&1") == 2);
        const fs::path good = scratch("good.cfg");
        std::ofstream(good) << "e_M = 0.00549006\n";
        CHECK(run("constants --config " + good.string() + " > /dev/null 2>&1") == 0);
    }
}
