#include "halfint/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace halfint {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string sanitize_token(std::string s) {
    for (char& c : s)
        if (c == ' ' || c == ',' || c == '\n' || c == '\t') c = '_';
    return s;
}

// "# halfint report v1 kind=<kind> key=value ..." — the versioned header
// line every emitted table starts with.
std::string header_line(const std::string& kind,
                        const std::vector<std::pair<std::string, std::string>>& meta) {
    std::string h = "# halfint report v1 kind=" + sanitize_token(kind);
    for (const auto& [k, v] : meta)
        h += " " + sanitize_token(k) + "=" + sanitize_token(v);
    h += "\n";
    return h;
}

std::string fmt_ld(long double v) { return format_double(static_cast<double>(v)); }

ordered_json meta_json(const std::vector<std::pair<std::string, std::string>>& meta) {
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : meta) m[k] = v;
    return m;
}

std::string center_of(const Rational& lo, const Rational& hi) {
    Rational c = (lo + hi) / 2;
    c.canonicalize();
    return format_double(mpq_get_d(c.get_mpq_t()));
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

std::string density_csv(const DensityReport& rep) {
    std::string out = header_line(rep.kind, rep.meta);
    out += "series,x,count,pi,excluded,ratio,reference\n";
    for (const auto& s : rep.series) {
        for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
            out += s.name + "," + std::to_string(rep.checkpoints[i]) + "," +
                   std::to_string(s.counts[i]) + "," + std::to_string(rep.pi_values[i]) +
                   "," + std::to_string(rep.excluded_counts[i]) + "," +
                   fmt_ld(s.ratios[i]) + ",";
            if (s.reference) out += fmt_ld(*s.reference);
            out += "\n";
        }
    }
    return out;
}

std::string density_json(const DensityReport& rep) {
    ordered_json j;
    j["schema"] = "halfint-report/1";
    j["kind"] = rep.kind;
    j["meta"] = meta_json(rep.meta);
    j["excluded_primes"] = rep.excluded_primes;
    j["checkpoints"] = rep.checkpoints;
    j["pi"] = rep.pi_values;
    j["excluded_counts"] = rep.excluded_counts;
    j["series"] = ordered_json::array();
    for (const auto& s : rep.series) {
        ordered_json js;
        js["name"] = s.name;
        if (s.reference)
            js["reference"] = static_cast<double>(*s.reference);
        else
            js["reference"] = nullptr;
        js["counts"] = s.counts;
        ordered_json ratios = ordered_json::array();
        for (long double r : s.ratios) ratios.push_back(static_cast<double>(r));
        js["ratios"] = ratios;
        j["series"].push_back(js);
    }
    return j.dump(2) + "\n";
}

std::string histogram_csv(const Histogram& h) {
    auto meta = h.meta;
    meta.emplace_back("in_domain", std::to_string(h.in_domain));
    meta.emplace_back("out_of_domain", std::to_string(h.out_of_domain));
    std::string out = header_line(h.kind, meta);
    out += "bin,lo,hi,count,mass,reference\n";
    for (unsigned i = 0; i < h.bins; ++i) {
        out += std::to_string(i) + "," + h.edges[i].get_str() + "," +
               h.edges[i + 1].get_str() + "," + std::to_string(h.counts[i]) + "," +
               fmt_ld(h.empirical_mass[i]) + "," + fmt_ld(h.reference_mass[i]) + "\n";
    }
    return out;
}

std::string histogram_json(const Histogram& h) {
    ordered_json j;
    j["schema"] = "halfint-report/1";
    j["kind"] = h.kind;
    j["meta"] = meta_json(h.meta);
    j["bins"] = h.bins;
    j["in_domain"] = h.in_domain;
    j["out_of_domain"] = h.out_of_domain;
    ordered_json edges = ordered_json::array();
    for (const auto& e : h.edges) edges.push_back(e.get_str());
    j["edges"] = edges;
    j["counts"] = h.counts;
    ordered_json em = ordered_json::array(), rm = ordered_json::array();
    for (long double v : h.empirical_mass) em.push_back(static_cast<double>(v));
    for (long double v : h.reference_mass) rm.push_back(static_cast<double>(v));
    j["empirical_mass"] = em;
    j["reference_mass"] = rm;
    return j.dump(2) + "\n";
}

std::string joint_csv(const JointHistogram& h) {
    auto meta = h.meta;
    meta.emplace_back("in_domain", std::to_string(h.in_domain));
    meta.emplace_back("out_of_domain", std::to_string(h.out_of_domain));
    std::string out = header_line(h.kind, meta);
    out += "i,j,lo1,hi1,lo2,hi2,count,mass,reference\n";
    for (unsigned i = 0; i < h.bins; ++i)
        for (unsigned j = 0; j < h.bins; ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," +
                   h.edges[i].get_str() + "," + h.edges[i + 1].get_str() + "," +
                   h.edges[j].get_str() + "," + h.edges[j + 1].get_str() + "," +
                   std::to_string(h.counts[i][j]) + "," + fmt_ld(h.empirical_mass[i][j]) +
                   "," + fmt_ld(h.reference_mass[i][j]) + "\n";
    return out;
}

std::string joint_json(const JointHistogram& h) {
    ordered_json j;
    j["schema"] = "halfint-report/1";
    j["kind"] = h.kind;
    j["meta"] = meta_json(h.meta);
    j["bins"] = h.bins;
    j["in_domain"] = h.in_domain;
    j["out_of_domain"] = h.out_of_domain;
    ordered_json edges = ordered_json::array();
    for (const auto& e : h.edges) edges.push_back(e.get_str());
    j["edges"] = edges;
    j["counts"] = h.counts;
    ordered_json em = ordered_json::array(), rm = ordered_json::array();
    for (unsigned i = 0; i < h.bins; ++i) {
        ordered_json re = ordered_json::array(), rr = ordered_json::array();
        for (unsigned jj = 0; jj < h.bins; ++jj) {
            re.push_back(static_cast<double>(h.empirical_mass[i][jj]));
            rr.push_back(static_cast<double>(h.reference_mass[i][jj]));
        }
        em.push_back(re);
        rm.push_back(rr);
    }
    j["empirical_mass"] = em;
    j["reference_mass"] = rm;
    j["max_abs_deviation"] = static_cast<double>(h.max_abs_deviation());
    return j.dump(2) + "\n";
}

std::string histogram_gnuplot(const Histogram& h) {
    std::string out;
    for (unsigned i = 0; i < h.bins; ++i)
        out += center_of(h.edges[i], h.edges[i + 1]) + " " + fmt_ld(h.empirical_mass[i]) +
               "\n";
    return out;
}

std::string joint_gnuplot(const JointHistogram& h) {
    std::string out;
    for (unsigned i = 0; i < h.bins; ++i) {
        for (unsigned j = 0; j < h.bins; ++j)
            out += center_of(h.edges[i], h.edges[i + 1]) + " " +
                   center_of(h.edges[j], h.edges[j + 1]) + " " +
                   fmt_ld(h.empirical_mass[i][j]) + "\n";
        out += "\n";  // grid block separator
    }
    return out;
}

std::string analytic_csv(const AnalyticDensityReport& rep) {
    std::string out = header_line("analytic-density", rep.meta);
    out += "s,partial_sum,normalizer,estimate\n";
    for (const auto& r : rep.rows)
        out += fmt_ld(r.s) + "," + fmt_ld(r.partial_sum) + "," + fmt_ld(r.normalizer) +
               "," + fmt_ld(r.estimate) + "\n";
    return out;
}

std::string analytic_json(const AnalyticDensityReport& rep) {
    ordered_json j;
    j["schema"] = "halfint-report/1";
    j["kind"] = "analytic-density";
    j["meta"] = meta_json(rep.meta);
    j["p_max"] = rep.p_max;
    j["rows"] = ordered_json::array();
    for (const auto& r : rep.rows) {
        ordered_json row;
        row["s"] = static_cast<double>(r.s);
        row["partial_sum"] = static_cast<double>(r.partial_sum);
        row["normalizer"] = static_cast<double>(r.normalizer);
        row["estimate"] = static_cast<double>(r.estimate);
        j["rows"].push_back(row);
    }
    return j.dump(2) + "\n";
}

std::string disagreement_primes_text(const DisagreementReport& rep) {
    std::string out;
    for (std::uint64_t p : rep.primes) out += std::to_string(p) + "\n";
    return out;
}

std::string disagreement_json(const DisagreementReport& rep) {
    ordered_json j;
    j["schema"] = "halfint-report/1";
    j["kind"] = "sign-disagreement";
    j["threshold"] = rep.threshold.get_str();
    j["exceeds_threshold"] = rep.exceeds_threshold;
    j["primes"] = rep.primes;
    j["density"] = ordered_json::parse(density_json(rep.density));
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec)
            throw std::runtime_error("cannot create directory " +
                                     path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

} // namespace halfint
