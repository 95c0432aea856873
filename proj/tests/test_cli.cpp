#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "mqw/model.hpp"

// Exercises the built executable end to end: exit codes, CSV shape,
// determinism of the data section, the argv round trip, and the overlay.

namespace {

struct RunResult {
    int exitCode = -1;
    std::string output;
};

std::string tempPath(const std::string& name) {
    return std::string("/tmp/mqw_cli_") + std::to_string(::getpid()) + "_" + name;
}

RunResult run(const std::string& args, const std::string& outFile) {
    const std::string cmd = std::string(MQW_CLI_BIN) + " " + args + " > " + outFile + " 2>&1";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exitCode = WEXITSTATUS(rc);
    std::ifstream in(outFile);
    std::stringstream ss;
    ss << in.rdbuf();
    r.output = ss.str();
    return r;
}

// Everything after the comment header; the header carries a timestamp.
std::string dataSection(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

std::string headerValue(const std::string& csv, const std::string& key) {
    std::istringstream in(csv);
    std::string line;
    const std::string prefix = "# " + key + " = ";
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return {};
}

std::vector<std::string> splitCsvLine(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, ',')) fields.push_back(f);
    return fields;
}

}  // namespace

TEST_CASE("exit codes: success and invalid specs") {
    CHECK(run("return-time --grid gtau:0.5:2:4", tempPath("ok.csv")).exitCode == 0);
    CHECK(run("return-time --grid beta:0:1:4", tempPath("badaxis.csv")).exitCode == 2);
    CHECK(run("return-time --engine spectral", tempPath("badeng.csv")).exitCode == 2);
    CHECK(run("return-time --engine closedform --alpha 0.4", tempPath("badcf.csv")).exitCode == 2);
    CHECK(run("detection-map --grid gtau:0:1:3 --grid N:1:5:3", tempPath("badmap.csv")).exitCode == 2);
    CHECK(run("nonsense", tempPath("nocmd.csv")).exitCode == 2);
    CHECK(run("broadening --alpha 0.3", tempPath("badbroad.csv")).exitCode == 2);
    CHECK(run("null-decay --engine spectral --protocol onsite", tempPath("badnull.csv")).exitCode == 2);
}

TEST_CASE("data sections are byte-identical across reruns and thread counts") {
    const std::string args = "montecarlo --grid gtau:0.4:2.4:6 --shots 3000 --seed 77";
    const auto a = run(args + " --threads 1", tempPath("mc1.csv"));
    const auto b = run(args + " --threads 4", tempPath("mc4.csv"));
    REQUIRE(a.exitCode == 0);
    REQUIRE(b.exitCode == 0);
    CHECK(dataSection(a.output) == dataSection(b.output));

    const auto c = run(args + " --seed 78", tempPath("mc5.csv"));
    CHECK(dataSection(a.output) != dataSection(c.output));
}

TEST_CASE("the argv header line reproduces the run") {
    const auto first = run("return-time --grid gtau:0.3:2.2:7 --alpha 0.5 --N 30",
                           tempPath("rt1.csv"));
    REQUIRE(first.exitCode == 0);
    const std::string echoed = headerValue(first.output, "argv");
    REQUIRE(!echoed.empty());
    const auto second = run(echoed, tempPath("rt2.csv"));
    REQUIRE(second.exitCode == 0);
    CHECK(dataSection(first.output) == dataSection(second.output));
}

TEST_CASE("detection map marks the phi = pi column dark for the on-site protocol") {
    const auto r = run("detection-map --grid gtau:0.4:2.8:5 --grid phi:0:6.283185307179586:5 --N 10",
                       tempPath("dm.csv"));
    REQUIRE(r.exitCode == 0);
    std::istringstream in(dataSection(r.output));
    std::string line;
    std::getline(in, line);  // column header
    CHECK(line == "gtau,phi,value,engine");
    int darkRows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = splitCsvLine(line);
        REQUIRE(f.size() == 4);
        const double phi = std::stod(f[1]);
        const double v = std::stod(f[2]);
        if (std::abs(phi - mqw::kPi) < 1e-9) {
            CHECK(v <= 1e-10);
            ++darkRows;
        }
    }
    CHECK(darkRows == 5);
}

TEST_CASE("phase diagram overlay rows sit on matching curves") {
    const std::string overlay = tempPath("curves.csv");
    const auto r = run("phase-diagram --grid alpha:-1.5:1.5:11 --grid gtau:0.1:6.9:11 --overlay " +
                           overlay,
                       tempPath("pd.csv"));
    REQUIRE(r.exitCode == 0);
    std::ifstream in(overlay);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);  // comment
    std::getline(in, line);  // column header
    CHECK(line == "pair,branch,family,alpha,gtau");
    int rows = 0;
    while (std::getline(in, line) && rows < 200) {
        const auto f = splitCsvLine(line);
        REQUIRE(f.size() == 5);
        const int pair = std::stoi(f[0]);
        const double alpha = std::stod(f[3]);
        const double gtau = std::stod(f[4]);
        const auto factors = mqw::phaseFactors(mqw::ModelParams::fromGammaTau(gtau, alpha));
        const int k = pair / 10, l = pair % 10;
        CHECK(std::abs(factors[static_cast<size_t>(k)] - factors[static_cast<size_t>(l)]) <= 1e-9);
        ++rows;
    }
    CHECK(rows > 50);
}

TEST_CASE("undefined cells emit the sentinel string") {
    // a dark initial state never detects: conditional mean is undefined
    const auto r = run("montecarlo --grid gtau:0.9:1.3:2 --phi 3.141592653589793 "
                       "--protocol onsite --shots 500 --observable meanN",
                       tempPath("undef.csv"));
    REQUIRE(r.exitCode == 0);
    CHECK(r.output.find("undefined") != std::string::npos);
}

TEST_CASE("meta sidecar is valid JSON with the run parameters") {
    const std::string meta = tempPath("meta.json");
    const auto r = run("spectra --grid gtau:0.5:3.5:7 --alpha 0.5 --meta " + meta,
                       tempPath("sp.csv"));
    REQUIRE(r.exitCode == 0);
    std::ifstream in(meta);
    REQUIRE(in.good());
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("\"command\": \"spectra\"") != std::string::npos);
    CHECK(all.find("\"steps\": 7") != std::string::npos);
}

TEST_CASE("--check passes on healthy runs") {
    CHECK(run("return-time --grid gtau:0.3:2.3:9 --engine closedform --check",
              tempPath("chk1.csv")).exitCode == 0);
    CHECK(run("null-decay --gtau 2.0 --alpha 0.5 --protocol tracking --grid N:2:40:8 --check",
              tempPath("chk2.csv")).exitCode == 0);
    CHECK(run("phase-diagram --grid alpha:-1:1:9 --grid gtau:0.2:6:9 --check",
              tempPath("chk3.csv")).exitCode == 0);
}
