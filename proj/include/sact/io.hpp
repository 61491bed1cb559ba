// sact - finite monoids, S-acts and primitive formulas
//
// Text formats for monoids and acts.
//
// A monoid file:
//
//   # comment
//   elements: 1 e f 0
//   identity: 1
//   table:
//   1 e f 0
//   e e 0 0
//   f 0 f 0
//   0 0 0 0
//
// An act file is an optional monoid section (or `monoid-file: PATH`,
// relative to the act file) followed by
//
//   carrier: p q r
//   action:
//   1: p q r
//   e: q q r
//   ...
//
// with one action row per monoid element.

#ifndef SACT_IO_HPP_
#define SACT_IO_HPP_

#include <cstddef>      // for size_t
#include <filesystem>   // for path
#include <fstream>      // for ifstream, ofstream
#include <optional>     // for optional
#include <sstream>      // for ostringstream, istringstream
#include <string>       // for string
#include <string_view>  // for string_view
#include <vector>       // for vector

#include "act.hpp"
#include "error.hpp"
#include "monoid.hpp"

namespace sact {

  namespace detail {
    struct Line {
      std::size_t number;
      std::string text;
    };

    inline std::string trim(std::string_view s) {
      auto const b = s.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) {
        return "";
      }
      auto const e = s.find_last_not_of(" \t\r");
      return std::string(s.substr(b, e - b + 1));
    }

    inline std::vector<std::string> words(std::string_view s) {
      std::istringstream       in{std::string(s)};
      std::vector<std::string> out;
      for (std::string w; in >> w;) {
        out.push_back(w);
      }
      return out;
    }

    inline std::vector<Line> significant_lines(std::string_view text) {
      std::vector<Line> out;
      std::size_t       number = 0, start = 0;
      while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
          end = text.size();
        }
        ++number;
        auto line = text.substr(start, end - start);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
          line = line.substr(0, hash);
        }
        auto t = trim(line);
        if (!t.empty()) {
          out.push_back({number, t});
        }
        start = end + 1;
      }
      return out;
    }

    [[noreturn]] inline void parse_error(std::size_t line, std::string const& msg) {
      throw Error(ErrorKind::parse_error, "line " + std::to_string(line) + ": " + msg, {line});
    }

    class LineReader {
     public:
      explicit LineReader(std::vector<Line> lines) : _lines(std::move(lines)) {}

      bool done() const noexcept {
        return _next == _lines.size();
      }

      Line const& peek() const {
        return _lines.at(_next);
      }

      std::size_t last_line() const noexcept {
        return _lines.empty() ? 0 : _lines.back().number;
      }

      std::optional<std::string> keyed(std::string_view key) {
        if (done()) {
          return std::nullopt;
        }
        auto const& t = peek().text;
        auto const  colon = t.find(':');
        if (colon == std::string::npos || trim(t.substr(0, colon)) != key) {
          return std::nullopt;
        }
        ++_next;
        return trim(t.substr(colon + 1));
      }

      std::string expect(std::string_view key) {
        if (done()) {
          parse_error(last_line() + 1, "expected '" + std::string(key) + ":'");
        }
        auto v = keyed(key);
        if (!v) {
          parse_error(peek().number, "expected '" + std::string(key) + ":'");
        }
        return *v;
      }

      Line const& take(std::string_view what) {
        if (done()) {
          parse_error(last_line() + 1, "expected " + std::string(what));
        }
        return _lines[_next++];
      }

      std::size_t previous_number() const {
        return _lines.at(_next - 1).number;
      }

     private:
      std::vector<Line> _lines;
      std::size_t       _next = 0;
    };

    inline std::size_t lookup(std::vector<std::string> const& names,
                              std::string const&              name,
                              std::size_t                     line,
                              std::string const&              what) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
          return i;
        }
      }
      parse_error(line, "unknown " + what + " '" + name + "'");
    }

    inline std::vector<std::string> read_names(std::string const& value,
                                               std::size_t        line,
                                               std::string const& what) {
      auto names = words(value);
      if (names.empty()) {
        parse_error(line, "no " + what + "s declared");
      }
      for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (names[i] == names[j]) {
            parse_error(line, "duplicate " + what + " '" + names[i] + "'");
          }
        }
        if (names[i].find(':') != std::string::npos) {
          parse_error(line, what + " names may not contain ':'");
        }
      }
      return names;
    }

    inline Monoid read_monoid_section(LineReader& in) {
      auto const elements_text = in.expect("elements");
      auto const elements      = read_names(elements_text, in.previous_number(), "element");
      auto const id_text  = in.expect("identity");
      auto const id_line  = in.previous_number();
      if (words(id_text).size() != 1) {
        parse_error(id_line, "identity must be a single element");
      }
      auto const identity = lookup(elements, id_text, id_line, "element");
      if (!in.expect("table").empty()) {
        parse_error(in.previous_number(), "table rows start on the next line");
      }
      std::size_t const                     n = elements.size();
      std::vector<std::vector<std::size_t>> rows;
      for (std::size_t i = 0; i < n; ++i) {
        auto const& line = in.take("table row " + std::to_string(i + 1));
        auto const  w    = words(line.text);
        if (w.size() != n) {
          parse_error(line.number, "table row has " + std::to_string(w.size()) + " entries, expected "
                                       + std::to_string(n));
        }
        rows.emplace_back();
        for (auto const& x : w) {
          rows.back().push_back(lookup(elements, x, line.number, "element"));
        }
      }
      return validate_monoid(rows, identity, elements);
    }

    inline std::string read_file(std::filesystem::path const& path) {
      std::ifstream in(path, std::ios::binary);
      if (!in) {
        throw Error(ErrorKind::io_error, "cannot read " + path.string());
      }
      std::ostringstream buf;
      buf << in.rdbuf();
      return buf.str();
    }
  }  // namespace detail

  inline Monoid read_monoid(std::string_view text) {
    detail::LineReader in(detail::significant_lines(text));
    auto               M = detail::read_monoid_section(in);
    if (!in.done()) {
      detail::parse_error(in.peek().number, "unexpected content after the table");
    }
    return M;
  }

  inline std::string write_monoid(Monoid const& M) {
    std::string out = "elements:";
    for (auto const& x : M.names()) {
      out += " " + x;
    }
    out += "\nidentity: " + M.name(M.identity()) + "\ntable:\n";
    for (std::size_t a = 0; a < M.size(); ++a) {
      for (std::size_t b = 0; b < M.size(); ++b) {
        out += (b == 0 ? "" : " ") + M.name(M(a, b));
      }
      out += "\n";
    }
    return out;
  }

  //! Reads an act. The monoid comes from the file (inline or by reference);
  //! when `given` is supplied too the two must be equal, and a file without a
  //! monoid section uses `given`.
  inline Act read_act(std::string_view             text,
                      std::filesystem::path const& base_dir = ".",
                      std::optional<Monoid> const& given    = std::nullopt) {
    detail::LineReader    in(detail::significant_lines(text));
    std::optional<Monoid> M;
    if (auto ref = in.keyed("monoid-file")) {
      auto path = base_dir / *ref;
      M         = read_monoid(detail::read_file(path));
    } else if (!in.done() && in.peek().text.starts_with("elements:")) {
      M = detail::read_monoid_section(in);
    }
    if (M && given && !(*M == *given)) {
      throw Error(ErrorKind::mixed_monoids, "act file declares a different monoid");
    }
    if (!M) {
      if (!given) {
        detail::parse_error(in.done() ? 1 : in.peek().number, "act file has no monoid");
      }
      M = given;
    }
    auto const carrier = in.expect("carrier");
    auto const points  = detail::read_names(carrier, in.previous_number(), "point");
    if (!in.expect("action").empty()) {
      detail::parse_error(in.previous_number(), "action rows start on the next line");
    }
    std::vector<std::vector<std::size_t>> rows(M->size());
    std::vector<bool>                     seen(M->size(), false);
    for (std::size_t i = 0; i < M->size(); ++i) {
      auto const& line  = in.take("action row");
      auto const  colon = line.text.find(':');
      if (colon == std::string::npos) {
        detail::parse_error(line.number, "action row must start with 'element:'");
      }
      auto const s = detail::lookup(M->names(), detail::trim(line.text.substr(0, colon)), line.number,
                                    "element");
      if (seen[s]) {
        detail::parse_error(line.number, "second action row for '" + M->name(s) + "'");
      }
      seen[s]      = true;
      auto const w = detail::words(line.text.substr(colon + 1));
      if (w.size() != points.size()) {
        detail::parse_error(line.number, "action row has " + std::to_string(w.size())
                                             + " entries, expected " + std::to_string(points.size()));
      }
      for (auto const& x : w) {
        rows[s].push_back(detail::lookup(points, x, line.number, "point"));
      }
    }
    if (!in.done()) {
      detail::parse_error(in.peek().number, "unexpected content after the action");
    }
    return validate_act(*M, rows, points);
  }

  //! Writes an act, with its monoid inline unless a reference path is given.
  inline std::string write_act(Act const& A, std::optional<std::string> const& monoid_ref = std::nullopt) {
    Monoid const& M   = A.monoid();
    std::string   out = monoid_ref ? "monoid-file: " + *monoid_ref + "\n" : write_monoid(M);
    out += "carrier:";
    for (auto const& p : A.names()) {
      out += " " + p;
    }
    out += "\naction:\n";
    for (std::size_t s = 0; s < M.size(); ++s) {
      out += M.name(s) + ":";
      for (std::size_t a = 0; a < A.size(); ++a) {
        out += " " + A.name(A(s, a));
      }
      out += "\n";
    }
    return out;
  }

  inline Monoid load_monoid(std::filesystem::path const& path) {
    return read_monoid(detail::read_file(path));
  }

  inline Act load_act(std::filesystem::path const& path, std::optional<Monoid> const& given = std::nullopt) {
    return read_act(detail::read_file(path), path.parent_path().empty() ? "." : path.parent_path(), given);
  }

  inline void save_text(std::filesystem::path const& path, std::string const& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
      throw Error(ErrorKind::io_error, "cannot write " + path.string());
    }
  }

}  // namespace sact

#endif  // SACT_IO_HPP_
