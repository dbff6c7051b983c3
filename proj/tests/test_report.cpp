#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "halfint/report.hpp"
#include "halfint/stats.hpp"

using namespace halfint;
namespace fs = std::filesystem;

namespace {

DensityReport sample_report() {
    DensityReport rep;
    rep.kind = "sign-exceptions";
    rep.checkpoints = {10, 100};
    rep.pi_values = {4, 25};
    rep.excluded_counts = {1, 1};
    rep.excluded_primes = {2};
    DensitySeries s;
    s.name = "disagree";
    s.counts = {0, 1};
    s.ratios = {0.0L, 1.0L / 24.0L};
    s.reference = 0.0L;
    rep.series.push_back(s);
    rep.meta.emplace_back("form", "weight 13/2, t = 1");
    return rep;
}

Histogram sample_histogram() {
    Histogram h;
    h.kind = "marginal-normalized-lift";
    h.bins = 2;
    h.edges = {Rational(-1), Rational(0), Rational(1)};
    h.counts = {3, 7};
    h.empirical_mass = {0.3L, 0.7L};
    h.reference_mass = {0.5L, 0.5L};
    h.in_domain = 10;
    h.out_of_domain = 0;
    h.meta.emplace_back("weight", "12");
    return h;
}

} // namespace

TEST_CASE("format_double emits shortest round-trip text") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-0.25) == "-0.25");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(std::stod(format_double(0.008957654723127035)) == 0.008957654723127035);
}

TEST_CASE("density CSV carries the versioned header and frozen columns") {
    DensityReport rep = sample_report();
    const std::string csv = density_csv(rep);
    CHECK(csv.rfind("# halfint report v1 kind=sign-exceptions", 0) == 0);
    CHECK(csv.find("series,x,count,pi,excluded,ratio,reference") != std::string::npos);
    CHECK(csv.find("disagree,10,0,4,1,0,0") != std::string::npos);
    CHECK(csv.find("disagree,100,1,25,1,") != std::string::npos);
    // byte determinism
    CHECK(density_csv(rep) == csv);
}

TEST_CASE("density CSV sanitizes meta tokens") {
    DensityReport rep = sample_report();
    rep.meta.emplace_back("note", "a b,c\td");
    const std::string csv = density_csv(rep);
    CHECK(csv.find("note=a_b_c_d") != std::string::npos);
}

TEST_CASE("density JSON is schema-tagged, parseable, and deterministic") {
    DensityReport rep = sample_report();
    const std::string text = density_json(rep);
    CHECK(density_json(rep) == text);
    nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j["schema"] == "halfint-report/1");
    CHECK(j["kind"] == "sign-exceptions");
    CHECK(j["checkpoints"] == nlohmann::json({10, 100}));
    CHECK(j["series"][0]["name"] == "disagree");
    CHECK(j["series"][0]["counts"][1] == 1);
    CHECK(j["meta"]["form"] == "weight 13/2, t = 1");
    CHECK(text.back() == '\n');
}

TEST_CASE("reference-free series render an empty reference cell and JSON null") {
    DensityReport rep = sample_report();
    rep.series[0].reference.reset();
    const std::string csv = density_csv(rep);
    CHECK(csv.find("disagree,10,0,4,1,0,\n") != std::string::npos);
    nlohmann::json j = nlohmann::json::parse(density_json(rep));
    CHECK(j["series"][0]["reference"].is_null());
}

TEST_CASE("histogram tables carry exact rational edges") {
    Histogram h = sample_histogram();
    const std::string csv = histogram_csv(h);
    CHECK(csv.find("bin,lo,hi,count,mass,reference") != std::string::npos);
    CHECK(csv.find("0,-1,0,3,0.3,0.5") != std::string::npos);
    CHECK(csv.find("1,0,1,7,0.7,0.5") != std::string::npos);
    nlohmann::json j = nlohmann::json::parse(histogram_json(h));
    CHECK(j["bins"] == 2);
    CHECK(j["edges"][0] == "-1");
    CHECK(j["in_domain"] == 10);

    const std::string plot = histogram_gnuplot(h);
    std::istringstream is(plot);
    std::string line;
    int data_lines = 0;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') ++data_lines;
    CHECK(data_lines == 2);
}

TEST_CASE("joint tables index both axes") {
    JointHistogram h;
    h.kind = "joint-normalized-lift";
    h.bins = 2;
    h.edges = {Rational(-1), Rational(0), Rational(1)};
    h.counts = {{1, 2}, {3, 4}};
    h.empirical_mass = {{0.1L, 0.2L}, {0.3L, 0.4L}};
    h.reference_mass = {{0.25L, 0.25L}, {0.25L, 0.25L}};
    h.in_domain = 10;
    const std::string csv = joint_csv(h);
    CHECK(csv.find("i,j,lo1,hi1,lo2,hi2,count,mass,reference") != std::string::npos);
    CHECK(csv.find("1,0,0,1,-1,0,3,0.3,0.25") != std::string::npos);
    nlohmann::json j = nlohmann::json::parse(joint_json(h));
    CHECK(j["counts"][1][1] == 4);
    CHECK(j["max_abs_deviation"].get<double>() == doctest::Approx(0.15));
    // gnuplot grid: blocks separated by a blank line
    CHECK(joint_gnuplot(h).find("\n\n") != std::string::npos);
}

TEST_CASE("disagreement exhibits") {
    DisagreementReport rep;
    rep.primes = {5, 11, 13};
    rep.density = sample_report();
    rep.exceeds_threshold = false;
    const std::string text = disagreement_primes_text(rep);
    CHECK(text == "5\n11\n13\n");
    nlohmann::json j = nlohmann::json::parse(disagreement_json(rep));
    CHECK(j["threshold"] == "6/25");
    CHECK(j["exceeds_threshold"] == false);
    CHECK(j["primes"].size() == 3);
}

TEST_CASE("write_text_file creates parents and round-trips bytes") {
    const fs::path dir = fs::current_path() / "report_scratch" / "nested";
    fs::remove_all(dir.parent_path());
    const fs::path p = dir / "out.txt";
    write_text_file(p, "alpha\nbeta\n");
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "alpha\nbeta\n");
    fs::remove_all(dir.parent_path());
}
