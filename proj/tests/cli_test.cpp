#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("geo_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string data(const std::string& name) { return std::string(GEO_DATA_DIR) + "/" + name; }

CliRun geo(const std::string& args, const std::string& env = "") {
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd =
        env + " " + std::string(GEO_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_temp(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(Cli, InspectW2Origin) {
    const fs::path out = scratch() / "inspect.json";
    const CliRun r = geo("inspect " + data("w2.json") + " --at 0,0 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(out));
    const auto& s = j["analysis"]["summary"];
    EXPECT_NEAR(s["K_1"].get<double>(), -4.0, 1e-12);
    EXPECT_NEAR(s["K_2"].get<double>(), -4.0, 1e-12);
    EXPECT_NEAR(std::abs(s["S_1_12_2"].get<double>()), 8.0, 1e-12);
    EXPECT_NE(r.out.find("K = -4"), std::string::npos);
}

TEST(Cli, InspectPlaneHasNoCurvature) {
    const CliRun r = geo("inspect " + data("plane.json") + " --at 0.3,0.1");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out.substr(r.out.find('{')));
    for (const auto& sec : j["analysis"]["sections"]) {
        EXPECT_EQ(sec["H"].get<double>(), 0.0);
        EXPECT_EQ(sec["K"].get<double>(), 0.0);
    }
    EXPECT_EQ(j["analysis"]["summary"]["S_1_12_2"].get<double>(), 0.0);
}

TEST(Cli, InspectOutsideDisc) {
    const CliRun r = geo("inspect " + data("w2.json") + " --at 2,0");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("out of domain"), std::string::npos) << r.err;
}

TEST(Cli, FlatnessClifford) {
    const fs::path out = scratch() / "clifford.json";
    const CliRun r = geo("flatness " + data("clifford.json") + " --grid 33 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_TRUE(j["flatness"]["flat"].get<bool>());
    EXPECT_TRUE(j["synthesis"]["success"].get<bool>());
}

TEST(Cli, FlatnessW2) {
    const fs::path out = scratch() / "w2.json";
    const CliRun r = geo("flatness " + data("w2.json") + " --grid 33 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_FALSE(j["flatness"]["flat"].get<bool>());
    EXPECT_FALSE(j["synthesis"]["success"].get<bool>());
    EXPECT_NEAR(std::abs(j["synthesis"]["origin_integrability_residual"].get<double>()), 8.0, 1e-4);
}

TEST(Cli, FlatnessCsvIsRowMajor) {
    const fs::path out = scratch() / "curv.csv";
    ASSERT_EQ(geo("flatness " + data("w2.json") + " --grid 9 --out " + out.string()).code, 0);
    std::istringstream csv(slurp(out));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "u,v,S_1_12_2,S_2_12_1,ricci_residual");
    double prev_u = -2, prev_v = -2;
    int rows = 0;
    while (std::getline(csv, line)) {
        double u = 0, v = 0;
        ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf", &u, &v), 2);
        EXPECT_TRUE(v > prev_v || (v == prev_v && u > prev_u)) << line;
        prev_u = u;
        prev_v = v;
        ++rows;
    }
    EXPECT_GT(rows, 40);
}

TEST(Cli, EstimateKnSweep) {
    const fs::path out = scratch() / "kn.csv";
    const CliRun r = geo("estimate " + data("w2.json") + " --experiment kn --R 10,30,100 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream csv(slurp(out));
    std::string header;
    std::getline(csv, header);
    std::vector<std::string> cols;
    std::stringstream hs(header);
    for (std::string c; std::getline(hs, c, ',');) cols.push_back(c);
    const auto col = std::find(cols.begin(), cols.end(), "quantity") - cols.begin();
    ASSERT_LT(static_cast<std::size_t>(col), cols.size());
    std::vector<double> q;
    for (std::string line; std::getline(csv, line);) {
        std::stringstream ls(line);
        std::string cell;
        for (long k = 0; k <= col; ++k) std::getline(ls, cell, ',');
        q.push_back(std::stod(cell));
    }
    ASSERT_EQ(q.size(), 3u);
    EXPECT_LT(q[0], q[1]);
    EXPECT_LT(q[1], q[2]);
    EXPECT_NEAR(q[2], 4.0, 0.01);
}

TEST(Cli, EstimateExperimentsRun) {
    for (const char* ex : {"growth --R 10,30,100", "pmc", "structure --h0 1", "osserman", "energy"}) {
        EXPECT_EQ(geo("estimate " + data("w2.json") + " --experiment " + ex).code, 0) << ex;
    }
    EXPECT_EQ(geo("estimate " + data("saddle.json") + " --experiment heinz --R 1,2").code, 0);
}

TEST(Cli, ScanCsv) {
    const fs::path out = scratch() / "scan.csv";
    ASSERT_EQ(geo("scan " + data("z3.json") + " --grid 9 --out " + out.string()).code, 0);
    const std::string text = slurp(out);
    EXPECT_EQ(text.rfind("u,v,W,g11,g12,g22,conformality_defect,H_1,K_1,", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 49);  // 49 masked nodes of a 9x9 grid
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(geo("inspect " + data("malformed.json") + " --at 0,0").code, 1);
    EXPECT_EQ(geo("inspect " + data("does-not-exist.json") + " --at 0,0").code, 1);
    EXPECT_EQ(geo("inspect " + data("degenerate.json") + " --at 0,0").code, 2);
    EXPECT_EQ(geo("scan " + data("degenerate.json")).code, 2);
    EXPECT_EQ(geo("flatness " + data("degenerate.json") + " --grid 9").code, 2);
    const fs::path logs = write_temp("log.json", R"j({"kind": "parametric", "n": 3, "components": ["u", "v", "log(u)"]})j");
    EXPECT_EQ(geo("inspect " + logs.string() + " --at=-0.5,0").code, 3);
    EXPECT_EQ(geo("scan " + logs.string() + " --grid 9").code, 3);
    EXPECT_EQ(geo("scan " + data("w2.json") + " --grid 8").code, 1);
    EXPECT_EQ(geo("scan " + data("w2.json") + " --grid 7").code, 1);
    EXPECT_EQ(geo("estimate " + data("w2.json") + " --experiment kn --R 10,5").code, 1);
    EXPECT_EQ(geo("estimate " + data("w2.json") + " --experiment kn --R 0,5").code, 1);
    EXPECT_EQ(geo("estimate " + data("w2.json") + " --experiment nope").code, 1);
    EXPECT_EQ(geo("estimate " + data("w2.json") + " --experiment heinz").code, 1);
    EXPECT_EQ(geo("flatness " + data("enneper.json")).code, 1);
    EXPECT_EQ(geo("inspect " + data("w2.json") + " --at 0").code, 1);
    EXPECT_EQ(geo("inspect " + data("w2.json")).code, 1);
    EXPECT_EQ(geo("frobnicate " + data("w2.json")).code, 1);
    EXPECT_EQ(geo("").code, 1);
}

TEST(Cli, ValidateIsDeterministicAcrossThreadCounts) {
    const fs::path a = scratch() / "v1.json", b = scratch() / "v8.json";
    const CliRun one = geo("validate " + data("w2.json") + " --out " + a.string(), "GEO_THREADS=1");
    const CliRun eight = geo("validate " + data("w2.json") + " --out " + b.string(), "GEO_THREADS=8");
    EXPECT_EQ(one.code, 0) << one.out;
    EXPECT_EQ(eight.code, 0) << eight.out;
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(one.out, eight.out);
}

TEST(Cli, ScanIsDeterministicAcrossThreadCounts) {
    const fs::path a = scratch() / "s1.csv", b = scratch() / "s8.csv";
    ASSERT_EQ(geo("scan " + data("clifford.json") + " --out " + a.string(), "GEO_THREADS=1").code, 0);
    ASSERT_EQ(geo("scan " + data("clifford.json") + " --out " + b.string(), "GEO_THREADS=8").code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
}
