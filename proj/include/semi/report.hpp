#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <deque>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semi/semiatlas.hpp"

namespace semi {

inline constexpr std::string_view kVersion = "0.1.0";

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

struct ReportSection {
  std::string title;
  std::vector<RelationReport> relations;
  /// Computed values as (key, value), printed in order.
  std::vector<std::pair<std::string, std::string>> values;
};

struct Tally {
  int hold = 0;
  int fail = 0;
  int skip = 0;
};

struct Report {
  std::string input;
  std::string digest;
  std::deque<ReportSection> sections;
  std::vector<std::pair<std::string, std::string>> scalars;
  /// A task without an answer (no solution, precondition not met).
  bool unanswered = false;

  ReportSection& section(std::string title) {
    sections.push_back({std::move(title), {}, {}});
    return sections.back();
  }

  [[nodiscard]] Tally tally() const {
    Tally t;
    for (const auto& s : sections) {
      for (const auto& r : s.relations) {
        switch (r.verdict) {
          case Verdict::Hold: ++t.hold; break;
          case Verdict::Fail: ++t.fail; break;
          case Verdict::Skip: ++t.skip; break;
        }
      }
    }
    return t;
  }

  [[nodiscard]] int exit_code() const { return tally().fail > 0 || unanswered ? 1 : 0; }

  [[nodiscard]] std::string human() const {
    std::string out = "semi " + std::string(kVersion) + "\ninput: " + input + "\nsha256: " + digest + "\n";
    for (const auto& s : sections) {
      out += "\n[" + s.title + "]\n";
      for (const auto& [k, v] : s.values) out += "  " + k + ": " + v + "\n";
      for (const auto& r : s.relations) {
        const char* tag = r.verdict == Verdict::Hold ? "hold" : r.verdict == Verdict::Fail ? "FAIL" : "skip";
        out += std::string("  ") + tag + "  " + r.relation;
        if (!r.cycle.empty()) out += " " + r.cycle_string();
        if (!r.note.empty()) out += "  (" + r.note + ")";
        out += "\n";
        if (r.witness) {
          out += "        lhs: " + r.witness->first.to_string() + "\n";
          out += "        rhs: " + r.witness->second.to_string() + "\n";
        }
      }
    }
    if (!scalars.empty()) {
      out += "\n[scalars]\n";
      for (const auto& [k, v] : scalars) out += "  " + k + ": " + v + "\n";
    }
    const Tally t = tally();
    out += "\nsummary: " + std::to_string(t.hold) + " hold, " + std::to_string(t.fail) + " fail, " +
           std::to_string(t.skip) + " skip\n";
    return out;
  }

  /// One record per line: `relation=<label> cycle=<ids> verdict=<v>`.
  [[nodiscard]] std::string machine() const {
    std::string out = "version=" + std::string(kVersion) + "\nsha256=" + digest + "\n";
    for (const auto& s : sections) {
      out += "section=" + s.title + "\n";
      for (const auto& [k, v] : s.values) out += "value " + k + "=" + v + "\n";
      for (const auto& r : s.relations) {
        out += "relation=" + r.relation + " cycle=" + (r.cycle.empty() ? std::string("-") : r.cycle_string()) +
               " verdict=" + to_string(r.verdict) + "\n";
      }
    }
    for (const auto& [k, v] : scalars) out += "scalar " + k + "=" + v + "\n";
    const Tally t = tally();
    out += "summary hold=" + std::to_string(t.hold) + " fail=" + std::to_string(t.fail) +
           " skip=" + std::to_string(t.skip) + "\n";
    return out;
  }
};

}  // namespace semi
