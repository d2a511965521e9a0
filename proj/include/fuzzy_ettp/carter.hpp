#pragma once

// Reader/writer for the Toronto (Carter, Laporte & Lee) benchmark format:
//   <name>.crs  one exam per line:  <code> <enrollment>
//   <name>.stu  one student per line: whitespace-separated exam codes

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fuzzy_ettp/instance.hpp"

namespace fuzzy_ettp {

class CarterParseError : public std::runtime_error {
 public:
  CarterParseError(const std::string& what, int lineno) : std::runtime_error(what), lineno_(lineno) {}
  [[nodiscard]] int lineno() const { return lineno_; }

 private:
  int lineno_;
};

class MalformedLine : public CarterParseError {
 public:
  MalformedLine(std::string_view file, int lineno, std::string_view why)
      : CarterParseError(std::string(file) + ":" + std::to_string(lineno) + ": malformed line (" +
                             std::string(why) + ")",
                         lineno) {}
};

class UnknownExamCode : public CarterParseError {
 public:
  UnknownExamCode(std::string code, int lineno)
      : CarterParseError("stu:" + std::to_string(lineno) + ": unknown exam code '" + code + "'", lineno),
        code_(std::move(code)) {}
  [[nodiscard]] const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct CarterExam {
  std::string code;
  int enrollment = 0;
};

struct EnrollmentMismatch {
  Index exam;
  int declared;  // .crs value
  int counted;   // .stu value (authoritative)
};

struct CarterDataset {
  std::string name;
  std::vector<CarterExam> exams;
  std::vector<std::vector<Index>> student_rows;  // exam indices per student
  std::vector<EnrollmentMismatch> mismatches;

  [[nodiscard]] std::size_t num_students() const { return student_rows.size(); }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++lineno, line);
    pos = end + 1;
  }
}

inline bool parse_int(std::string_view s, long& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace detail

inline CarterDataset parse_carter(std::string_view crs_text, std::string_view stu_text, std::string name = {}) {
  CarterDataset ds;
  ds.name = std::move(name);
  std::unordered_map<std::string, Index> by_code;
  std::unordered_map<long, Index> by_number;

  detail::for_each_line(crs_text, [&](int lineno, std::string_view line) {
    auto tok = detail::split_ws(line);
    if (tok.empty()) return;
    long enrollment = 0;
    if (tok.size() != 2) throw MalformedLine("crs", lineno, "expected '<code> <enrollment>'");
    if (!detail::parse_int(tok[1], enrollment) || enrollment < 0)
      throw MalformedLine("crs", lineno, "enrollment is not a non-negative integer");
    std::string code(tok[0]);
    if (by_code.contains(code)) throw MalformedLine("crs", lineno, "duplicate exam code");
    const Index idx = static_cast<Index>(ds.exams.size());
    by_code.emplace(code, idx);
    if (long num = 0; detail::parse_int(tok[0], num)) by_number.emplace(num, idx);
    ds.exams.push_back({std::move(code), static_cast<int>(enrollment)});
  });

  detail::for_each_line(stu_text, [&](int lineno, std::string_view line) {
    auto tok = detail::split_ws(line);
    if (tok.empty()) return;
    std::vector<Index> row;
    row.reserve(tok.size());
    for (auto t : tok) {
      std::string code(t);
      auto it = by_code.find(code);
      if (it != by_code.end()) {
        row.push_back(it->second);
        continue;
      }
      // Codes are zero-padded in some files and not in others.
      long num = 0;
      auto nit = detail::parse_int(t, num) ? by_number.find(num) : by_number.end();
      if (nit == by_number.end()) throw UnknownExamCode(code, lineno);
      row.push_back(nit->second);
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    ds.student_rows.push_back(std::move(row));
  });

  std::vector<int> counted(ds.exams.size(), 0);
  for (const auto& row : ds.student_rows)
    for (Index e : row) ++counted[e];
  for (std::size_t i = 0; i < ds.exams.size(); ++i) {
    if (counted[i] != ds.exams[i].enrollment) {
      ds.mismatches.push_back({static_cast<Index>(i), ds.exams[i].enrollment, counted[i]});
      ds.exams[i].enrollment = counted[i];
    }
  }
  return ds;
}

struct CarterText {
  std::string crs;
  std::string stu;
};

inline CarterText serialize_carter(const CarterDataset& ds) {
  CarterText out;
  for (const auto& e : ds.exams) out.crs += e.code + ' ' + std::to_string(e.enrollment) + '\n';
  for (const auto& row : ds.student_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.stu += ' ';
      out.stu += ds.exams[row[i]].code;
    }
    out.stu += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads <stem>.crs and <stem>.stu; `stem` may also name either file.
inline CarterDataset load_carter(std::filesystem::path stem) {
  if (stem.extension() == ".crs" || stem.extension() == ".stu") stem.replace_extension();
  auto crs = stem;
  crs += ".crs";
  auto stu = stem;
  stu += ".stu";
  return parse_carter(read_text_file(crs), read_text_file(stu), stem.filename().string());
}

inline void write_carter(const CarterDataset& ds, const std::filesystem::path& stem) {
  auto text = serialize_carter(ds);
  auto crs = stem;
  crs += ".crs";
  auto stu = stem;
  stu += ".stu";
  if (stem.has_parent_path()) std::filesystem::create_directories(stem.parent_path());
  for (const auto& [path, body] : {std::pair{crs, &text.crs}, std::pair{stu, &text.stu}}) {
    std::ofstream out(path, std::ios::binary);
    out << *body;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
}

/// Conventional period budgets for the thirteen Toronto instances.
inline const std::map<std::string, int, std::less<>>& carter_standard_periods() {
  static const std::map<std::string, int, std::less<>> periods = {
      {"car-f-92", 32}, {"car-s-91", 35}, {"ear-f-83", 24}, {"hec-s-92", 18}, {"kfu-s-93", 20},
      {"lse-f-91", 18}, {"pur-s-93", 42}, {"rye-s-93", 23}, {"sta-f-83", 13}, {"tre-s-92", 23},
      {"uta-s-92", 35}, {"ute-s-92", 10}, {"yor-f-83", 21},
  };
  return periods;
}

/// Slot-assignment-only instance: one theory exam per code, no rooms or
/// teachers, a linear grid of `num_slots` periods.
inline Instance carter_instance(const CarterDataset& ds, int num_slots) {
  Instance inst;
  inst.name = ds.name;
  inst.grid = SlotGrid::linear(num_slots);
  inst.exams.reserve(ds.exams.size());
  for (std::size_t i = 0; i < ds.exams.size(); ++i) {
    Exam e;
    e.id = static_cast<Index>(i);
    e.course_id = static_cast<Index>(i);
    e.code = ds.exams[i].code;
    inst.exams.push_back(std::move(e));
  }
  inst.registrations = RegistrationMatrix(ds.exams.size(), ds.student_rows);
  return inst;
}

/// Carter view of an instance's registrations (codes zero-padded to 4 digits
/// unless the exams carry their own codes).
inline CarterDataset to_carter(const Instance& inst) {
  CarterDataset ds;
  ds.name = inst.name;
  for (std::size_t i = 0; i < inst.num_exams(); ++i) {
    std::string code = inst.exams[i].code;
    if (code.empty()) {
      code = std::to_string(i + 1);
      if (code.size() < 4) code.insert(0, 4 - code.size(), '0');
    }
    ds.exams.push_back({code, inst.enrollment(static_cast<Index>(i))});
  }
  ds.student_rows = inst.registrations.students();
  return ds;
}

}  // namespace fuzzy_ettp
