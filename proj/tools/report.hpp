// JSON/CSV reporting for the batch experiment front end. Reports are
// deterministic: sorted keys, fixed float formatting, and a config hash so
// identical configs produce identical bytes.
#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace indexlab::cli {

using nlohmann::json;

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct Assertion {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

class Report {
  public:
    Report(std::string command, json config) : command_(std::move(command)), config_(std::move(config)) {}

    // |value| <= threshold
    bool check_abs(const std::string& name, double value, double threshold) {
        Assertion a{name, value, threshold, std::abs(value) <= threshold};
        assertions_.push_back(a);
        return a.pass;
    }

    // value <= threshold
    bool check_le(const std::string& name, double value, double threshold) {
        Assertion a{name, value, threshold, value <= threshold};
        assertions_.push_back(a);
        return a.pass;
    }

    void tolerance(const std::string& name, double value) { tolerances_[name] = value; }
    json& outputs() { return outputs_; }

    bool all_pass() const {
        for (const auto& a : assertions_) {
            if (!a.pass) return false;
        }
        return true;
    }

    json to_json() const {
        json doc;
        doc["command"] = command_;
        doc["config"] = config_;
        doc["config_hash"] = fnv1a(config_.dump());
        doc["tolerances"] = tolerances_;
        doc["outputs"] = outputs_;
        json checks = json::array();
        for (const auto& a : assertions_) {
            checks.push_back({{"name", a.name},
                              {"value", a.value},
                              {"threshold", a.threshold},
                              {"pass", a.pass}});
        }
        doc["assertions"] = checks;
        doc["pass"] = all_pass();
        return doc;
    }

    int write(const std::string& out_path) const {
        const std::string body = to_json().dump(2) + "\n";
        if (out_path.empty() || out_path == "-") {
            std::cout << body;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) {
                std::cerr << "cannot open output path: " << out_path << "\n";
                return 2;
            }
            f << body;
        }
        return all_pass() ? 0 : 1;
    }

  private:
    std::string command_;
    json config_;
    json tolerances_ = json::object();
    json outputs_ = json::object();
    std::vector<Assertion> assertions_;
};

// CSV with a header row, '.' decimal separator, 17 significant digits.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) {
        if (!path.empty()) f_ = std::fopen(path.c_str(), "wb");
    }
    ~CsvWriter() {
        if (f_) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::vector<std::string>& cols) {
        if (!f_) return;
        for (std::size_t i = 0; i < cols.size(); ++i)
            std::fprintf(f_, "%s%s", cols[i].c_str(), i + 1 < cols.size() ? "," : "\n");
    }
    void row(const std::vector<double>& vals) {
        if (!f_) return;
        for (std::size_t i = 0; i < vals.size(); ++i)
            std::fprintf(f_, "%.17g%s", vals[i], i + 1 < vals.size() ? "," : "\n");
    }

  private:
    std::FILE* f_ = nullptr;
};

}  // namespace indexlab::cli
