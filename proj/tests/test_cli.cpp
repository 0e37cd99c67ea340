// End-to-end checks of the command-line tool. Runs the binary given as
// argv[1] inside a scratch directory and inspects exit codes and outputs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "support/fixtures.hpp"
#include "tnepfacts/grid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_bin;
int g_failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            std::printf("FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond);   \
            ++g_failures;                                                   \
        }                                                                   \
    } while (0)

int run(const std::string& args, const std::string& log = "/dev/null") {
    const std::string cmd = g_bin + " " + args + " >" + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    EXPECT(in.good());
    json j;
    in >> j;
    return j;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: test_cli <path-to-binary>\n");
        return 2;
    }
    g_bin = argv[1];
    const fs::path work = fs::temp_directory_path() / "tnepfacts_cli_test";
    fs::remove_all(work);
    fs::create_directories(work);
    const auto in_work = [&](const std::string& rel) { return (work / rel).string(); };

    // usage errors exit with 1
    EXPECT(run("") == 1);
    EXPECT(run("frobnicate") == 1);
    EXPECT(run("build --net x.json --series y.csv --formulation nope") == 1);

    // generate writes the instance files
    EXPECT(run("generate --seed 3 --buses 4 --branches 4 --gens 4 --renewable-frac 0.5 "
               "--hours 6 --out " + in_work("gen")) == 0);
    EXPECT(fs::exists(work / "gen/network.json"));
    EXPECT(fs::exists(work / "gen/series.csv"));
    EXPECT(fs::exists(work / "gen/manifest.json"));
    EXPECT(read_json(work / "gen/manifest.json").contains("manifest_hash"));

    // impossible dimensions are a validation failure
    EXPECT(run("generate --buses 5 --branches 3 --gens 2 --out " + in_work("bad")) == 2);

    // scenario selection emits exactly ten scenarios
    EXPECT(run("scenarios --net " + in_work("gen/network.json") + " --series " +
               in_work("gen/series.csv") + " --out " + in_work("scn")) == 0);
    EXPECT(read_json(work / "scn/scenarios.json").at("scenarios").size() == 10);

    // catalogued fixture files for the solver-facing commands
    {
        using namespace tnepfacts;
        const testsupport::Fixture tri = testsupport::triangle_congested();
        save_network(tri.net, in_work("tri_net.json"));
        save_scenarios(tri.scenarios, in_work("tri_scen.json"));
    }
    const std::string tri_args =
        " --net " + in_work("tri_net.json") + " --scenarios " + in_work("tri_scen.json");

    // build: stats JSON carries the size counts
    EXPECT(run("build" + tri_args + " --formulation facets --no-emit-eq22 --out " +
               in_work("bld")) == 0);
    {
        const json st = read_json(work / "bld/stats_facets.json");
        // 16 shared variables + 3 psi + 3 dpf + 6 sign binaries
        EXPECT(st.at("n_vars") == 28);
        EXPECT(st.at("n_constraints") == 18 + 9 * 3);
        EXPECT(fs::exists(work / "bld/model_facets.mps"));
    }

    // idempotence: a rebuild under the same manifest is byte-identical
    EXPECT(run("build" + tri_args + " --formulation facets --no-emit-eq22 --out " +
               in_work("bld2")) == 0);
    EXPECT(slurp(work / "bld/model_facets.mps") == slurp(work / "bld2/model_facets.mps"));
    EXPECT(slurp(work / "bld/stats_facets.json") == slurp(work / "bld2/stats_facets.json"));

    // solve with the reference engine, then validate and summarize
    EXPECT(run("solve" + tri_args + " --formulation facets --gap 1e-9 --out " +
               in_work("slv"), in_work("solve.log")) == 0);
    EXPECT(fs::exists(work / "slv/solution_facets.sol"));
    {
        const json v = read_json(work / "slv/validation_facets.json");
        EXPECT(v.at("pass") == true);
        const json s = read_json(work / "slv/summary_facets.json");
        EXPECT(std::abs(s.at("total_cost").get<double>() - 222000.0) < 1.0);
        EXPECT(s.at("tcsc_count") == 1);
    }

    // report: summary plus the three geo CSVs
    EXPECT(run("report" + tri_args + " --formulation facets --solution " +
               in_work("slv/solution_facets.sol") + " --out " + in_work("rep")) == 0);
    EXPECT(fs::exists(work / "rep/geo_unserved.csv"));
    EXPECT(fs::exists(work / "rep/geo_curtailed.csv"));
    EXPECT(fs::exists(work / "rep/geo_investment.csv"));
    EXPECT(slurp(work / "rep/geo_investment.csv").rfind("entity_id,x,y,value\n", 0) == 0);

    // external engine round trip via the solution file
    EXPECT(run("solve" + tri_args + " --formulation facets --engine external --out " +
               in_work("ext")) == 0);
    EXPECT(fs::exists(work / "ext/model_facets.mps"));
    EXPECT(run("solve" + tri_args + " --formulation facets --engine external --solution " +
               in_work("slv/solution_facets.sol") + " --out " + in_work("ext")) == 0);
    EXPECT(read_json(work / "ext/validation_facets.json").at("pass") == true);

    // verify: facet report on the default parameters
    EXPECT(run("verify", in_work("verify.json")) == 0);
    {
        std::ifstream in(in_work("verify.json"));
        json rep;
        in >> rep;
        EXPECT(rep.at("all_facets") == true);
        EXPECT(rep.at("checks").size() == 11);
    }
    EXPECT(run("verify --samples 2000 --seed 5", in_work("verify2.json")) == 0);
    {
        std::ifstream in(in_work("verify2.json"));
        json rep;
        in >> rep;
        EXPECT(rep.at("containment").at("containment_violations") == 0);
    }

    // degenerate parameters warn but succeed
    EXPECT(run("verify --db-min 0 --db-max 0") == 0);

    // corrupted solution file fails verification with exit 2
    {
        std::ofstream bad(in_work("bad.sol"));
        bad << slurp(work / "slv/solution_facets.sol");
        bad << "dpf_2_0 55\n";  // overrides the device flow change
    }
    EXPECT(run("verify" + tri_args + " --formulation facets --solution " +
               in_work("bad.sol"), in_work("verify3.log")) == 2);

    // compare: four rows, the device formulations agree
    EXPECT(run("compare" + tri_args + " --gap 1e-9 --out " + in_work("cmp"),
               in_work("compare.log")) == 0);
    {
        const json cmp = read_json(work / "cmp/comparison.json");
        EXPECT(cmp.at("rows").size() == 4);
        EXPECT(cmp.at("facts_objectives_agree") == true);
        const std::string table = slurp(in_work("compare.log"));
        EXPECT(table.find("tnep") != std::string::npos);
        EXPECT(table.find("facets") != std::string::npos);
    }

    // reference engine refuses beyond desk scale with exit 3
    EXPECT(run("solve --net " + in_work("gen/network.json") + " --series " +
               in_work("gen/series.csv") + " --formulation facets --out " +
               in_work("big"), in_work("big.log")) == 3);

    // TNEP_FACTS_OUT overrides --out
    {
        const std::string cmd = "TNEP_FACTS_OUT=" + in_work("envout") + " " + g_bin +
                                " build" + tri_args +
                                " --formulation tnep --out " + in_work("ignored") +
                                " >/dev/null 2>&1";
        EXPECT(std::system(cmd.c_str()) == 0);
        EXPECT(fs::exists(work / "envout/stats_tnep.json"));
        EXPECT(!fs::exists(work / "ignored/stats_tnep.json"));
    }

    if (g_failures == 0) {
        std::printf("test_cli: all checks passed\n");
        return 0;
    }
    std::printf("test_cli: %d failures\n", g_failures);
    return 1;
}
