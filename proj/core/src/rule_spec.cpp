#include "propscore/rule_spec.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "propscore/catalog.hpp"
#include "propscore/error.hpp"

namespace propscore {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view text, std::size_t line, const std::string& field) {
  ExtReal v;
  if (!parse_ext_real(text, v) || v.is_neg_inf()) {
    throw ParseError(line, field, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v.value();
}

ExtReal parse_endpoint(std::string_view text, std::size_t line, const std::string& field) {
  ExtReal v;
  if (!parse_ext_real(text, v)) {
    throw ParseError(line, field, "expected a number or -inf, got '" + std::string(text) + "'");
  }
  return v;
}

bool parse_flag(std::string_view text, std::size_t line, const std::string& field) {
  if (text == "0") return false;
  if (text == "1") return true;
  throw ParseError(line, field, "expected 0 or 1, got '" + std::string(text) + "'");
}

Direction parse_direction(std::string_view text, std::size_t line, const std::string& field) {
  if (text == "nondecreasing") return Direction::NonDecreasing;
  if (text == "nonincreasing") return Direction::NonIncreasing;
  if (text == "unconstrained") return Direction::Unconstrained;
  throw ParseError(line, field, "unknown direction '" + std::string(text) + "'");
}

Form parse_form(std::span<const std::string_view> tok, Breakpoint lo, Breakpoint hi,
                std::size_t line) {
  const std::string_view kind = tok[0];
  auto expect = [&](std::size_t n) {
    if (tok.size() != n + 1) {
      throw ParseError(line, std::string(kind),
                       "expected " + std::to_string(n) + " parameter(s), got " +
                           std::to_string(tok.size() - 1));
    }
  };
  auto num = [&](std::size_t i) { return parse_real(tok[i], line, std::string(kind)); };
  if (kind == "constant") {
    expect(1);
    return Constant{num(1)};
  }
  if (kind == "affine") {
    expect(2);
    return Affine{num(1), num(2)};
  }
  if (kind == "log") {
    expect(3);
    return LogForm{num(1), num(2), num(3)};
  }
  if (kind == "quadratic") {
    expect(3);
    return Quadratic{num(1), num(2), num(3)};
  }
  if (kind == "combined") {
    expect(7);
    return Combined{num(1), num(2), num(3), num(4), num(5), num(6), num(7)};
  }
  if (kind == "opaque") {
    expect(1);
    auto op = opaque_from_tag(tok[1], lo, hi);
    if (!op) throw ParseError(line, "opaque", "unknown tag '" + std::string(tok[1]) + "'");
    return *op;
  }
  throw ParseError(line, "form", "unknown form '" + std::string(kind) + "'");
}

struct Block {
  std::string name;  // "T" or "F"
  std::size_t line = 0;
  Direction direction = Direction::Unconstrained;
  std::vector<Segment> segments;
  std::optional<ExtReal> at0;
  std::optional<ExtReal> at1;
};

ScoreFn finish(Block& b, std::size_t end_line) {
  if (!b.at0) throw ParseError(end_line, "at0", b.name + " block has no at0 line");
  if (!b.at1) throw ParseError(end_line, "at1", b.name + " block has no at1 line");
  if (b.segments.empty()) throw ParseError(b.line, "segment", b.name + " block has no segments");
  try {
    return ScoreFn(std::move(b.segments), *b.at0, *b.at1, b.direction);
  } catch (const NotMonotone& e) {
    throw SchemaError(b.name + " is not " + to_string(b.direction) + ": " + e.what());
  } catch (const InvalidSegment& e) {
    throw ParseError(b.line, "segment", e.what());
  } catch (const DomainError& e) {
    throw ParseError(b.line, "segment", e.what());
  }
}

void write_form(std::ostream& os, const Form& form) {
  auto n = [](double v) { return format_number(v); };
  std::visit(Overloaded{
                 [&](const Constant& k) { os << "constant " << n(k.c); },
                 [&](const Affine& k) { os << "affine " << n(k.a) << ' ' << n(k.b); },
                 [&](const LogForm& k) {
                   os << "log " << n(k.a) << ' ' << n(k.b) << ' ' << n(k.c);
                 },
                 [&](const Quadratic& k) {
                   os << "quadratic " << n(k.a) << ' ' << n(k.b) << ' ' << n(k.c);
                 },
                 [&](const Combined& k) {
                   os << "combined " << n(k.c0) << ' ' << n(k.c1) << ' ' << n(k.c2) << ' '
                      << n(k.log_u) << ' ' << n(k.log_1mu) << ' ' << n(k.inv_u) << ' '
                      << n(k.inv_1mu);
                 },
                 [&](const Opaque& k) {
                   if (k.fn->tag.empty()) {
                     throw SchemaError("opaque segment has no registry tag");
                   }
                   os << "opaque " << k.fn->tag;
                 },
             },
             form);
}

void write_block(std::ostream& os, const char* name, const ScoreFn& f) {
  os << name << ' ' << to_string(f.direction()) << '\n';
  for (const Segment& s : f.segments()) {
    os << "segment " << format_number(s.lo.x) << ' ' << format_number(s.hi.x) << ' '
       << (s.lo_closed ? 1 : 0) << ' ' << (s.hi_closed ? 1 : 0) << ' ';
    write_form(os, s.form);
    os << '\n';
  }
  os << "at0 " << format_number(f.value_at_0()) << '\n';
  os << "at1 " << format_number(f.value_at_1()) << '\n';
}

}  // namespace

RuleSpecDocument parse_rule_spec(std::string_view text) {
  std::optional<std::string> name;
  std::string notes;
  std::optional<ScoreFn> T;
  std::optional<ScoreFn> F;
  std::optional<double> C;
  std::optional<double> c;
  std::optional<Block> open;

  std::size_t line_no = 0;
  auto close_block = [&](std::size_t at_line) {
    if (!open) return;
    ScoreFn f = finish(*open, at_line);
    (open->name == "T" ? T : F) = std::move(f);
    open.reset();
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto tok = split(raw);
    const std::string_view key = tok[0];

    if (!name && key != "rule") throw ParseError(line_no, "rule", "document must start with 'rule <name>'");
    if (key == "segment" || key == "at0" || key == "at1") {
      if (!open) throw ParseError(line_no, std::string(key), "outside a T or F block");
      if (key == "segment") {
        if (tok.size() < 6) throw ParseError(line_no, "segment", "too few fields");
        const Breakpoint lo = Breakpoint::at(parse_real(tok[1], line_no, "lo"));
        const Breakpoint hi = Breakpoint::at(parse_real(tok[2], line_no, "hi"));
        const bool lo_closed = parse_flag(tok[3], line_no, "lo_closed");
        const bool hi_closed = parse_flag(tok[4], line_no, "hi_closed");
        Form form = parse_form(std::span(tok).subspan(5), lo, hi, line_no);
        open->segments.push_back(Segment{lo, hi, lo_closed, hi_closed, std::move(form)});
      } else {
        if (tok.size() != 2) throw ParseError(line_no, std::string(key), "expected one value");
        auto& slot = key == "at0" ? open->at0 : open->at1;
        if (slot) throw ParseError(line_no, std::string(key), "duplicate endpoint value");
        slot = parse_endpoint(tok[1], line_no, std::string(key));
      }
      continue;
    }
    close_block(line_no);

    if (key == "rule") {
      if (name) throw ParseError(line_no, "rule", "duplicate rule line");
      if (tok.size() != 2) throw ParseError(line_no, "rule", "expected a single-token name");
      name = std::string(tok[1]);
    } else if (key == "notes") {
      notes = std::string(trim(raw.substr(5)));
    } else if (key == "T" || key == "F") {
      if (tok.size() != 2) throw ParseError(line_no, std::string(key), "expected a direction");
      if ((key == "T" && T) || (key == "F" && F)) {
        throw ParseError(line_no, std::string(key), "duplicate block");
      }
      const Direction d = parse_direction(tok[1], line_no, std::string(key));
      const Direction forbidden = key == "T" ? Direction::NonIncreasing : Direction::NonDecreasing;
      if (d == forbidden) {
        throw SchemaError(std::string(key) + " cannot be declared " + to_string(d));
      }
      open = Block{std::string(key), line_no, d, {}, {}, {}};
    } else if (key == "C" || key == "c") {
      if (tok.size() != 2) throw ParseError(line_no, std::string(key), "expected one value");
      auto& slot = key == "C" ? C : c;
      if (slot) throw ParseError(line_no, std::string(key), "duplicate value");
      slot = parse_real(tok[1], line_no, std::string(key));
      if (key == "c" && *slot < 0.0) throw ValueError("c must be >= 0");
    } else {
      throw ParseError(line_no, "keyword", "unknown keyword '" + std::string(key) + "'");
    }
  }
  close_block(line_no);
  if (!name) throw ParseError(line_no, "rule", "missing 'rule <name>' line");
  if (!T) throw ParseError(line_no, "T", "missing T block");
  return RuleSpecDocument{std::move(*name), std::move(notes), std::move(*T), std::move(F), C, c};
}

std::string serialize_rule_spec(const RuleSpecDocument& doc) {
  if (doc.name.empty() || doc.name.find_first_of(" \t\n#") != std::string::npos) {
    throw SchemaError("rule name must be a single token");
  }
  if (doc.notes.find_first_of("\n#") != std::string::npos) {
    throw SchemaError("notes must be a single line without '#'");
  }
  std::ostringstream os;
  os << "rule " << doc.name << '\n';
  if (!doc.notes.empty()) os << "notes " << doc.notes << '\n';
  write_block(os, "T", doc.T);
  if (doc.F) write_block(os, "F", *doc.F);
  if (doc.C) os << "C " << format_number(*doc.C) << '\n';
  if (doc.c) os << "c " << format_number(*doc.c) << '\n';
  return os.str();
}

RuleSpecDocument read_rule_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValueError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule_spec(buf.str());
}

ScoringRule load_rule(const RuleSpecDocument& doc) {
  const double C = doc.C.value_or(0.0);
  const double c = doc.c.value_or(0.0);
  if (doc.F) return ScoringRule{doc.T, *doc.F, C, c, Provenance::UserSupplied};
  try {
    return derive_false_score(doc.T, C, c);
  } catch (const NotMonotone& e) {
    throw SchemaError(std::string("cannot derive F: ") + e.what());
  }
}

bool is_serializable(const ScoreFn& f) noexcept {
  for (const Segment& s : f.segments()) {
    if (const auto* op = std::get_if<Opaque>(&s.form); op && op->fn->tag.empty()) return false;
  }
  return true;
}

}  // namespace propscore
