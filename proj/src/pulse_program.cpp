#include "spinpair/pulse_program.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace spinpair {

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    out.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

[[noreturn]] void fail(int line, int col, const std::string& msg) {
  throw ParseError(msg, line, col);
}

double number_from(std::string_view text, int line, int col) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    fail(line, col, "expected a number, got '" + std::string(text) + "'");
  return v;
}

// duration := number | expr "/J" ; expr := factor ("/" number)*
// factor := number | "sqrt(" number ")"
Duration duration_from(const Token& t, int line) {
  std::string_view text = t.text;
  Duration d;
  if (text.size() > 2 && text.substr(text.size() - 2) == "/J") {
    d.per_j = true;
    text = text.substr(0, text.size() - 2);
  }
  double value = 0.0;
  size_t pos = 0;
  if (text.rfind("sqrt(", 0) == 0) {
    const size_t close = text.find(')', 5);
    if (close == std::string_view::npos)
      fail(line, t.col, "unterminated sqrt( in duration");
    const double arg = number_from(text.substr(5, close - 5), line, t.col);
    if (arg < 0.0) fail(line, t.col, "sqrt of a negative number in duration");
    value = std::sqrt(arg);
    pos = close + 1;
  } else {
    const size_t slash = text.find('/');
    const size_t head = slash == std::string_view::npos ? text.size() : slash;
    value = number_from(text.substr(0, head), line, t.col);
    pos = head;
  }
  while (pos < text.size()) {
    if (text[pos] != '/')
      fail(line, t.col, "expected '/' in duration expression");
    const size_t next = text.find('/', pos + 1);
    const size_t head = next == std::string_view::npos ? text.size() : next;
    const double div = number_from(text.substr(pos + 1, head - pos - 1), line, t.col);
    if (div == 0.0) fail(line, t.col, "division by zero in duration");
    value /= div;
    pos = head;
  }
  if (value < 0.0) fail(line, t.col, "negative duration");
  d.value = value;
  return d;
}

RfValue rf_value_from(std::string_view text, int line, int col) {
  RfValue v;
  if (!text.empty() && text.back() == 'J') {
    v.in_j = true;
    text.remove_suffix(1);
  }
  v.value = number_from(text, line, col);
  return v;
}

Channel channel_from(const Token& t, int line) {
  if (t.text == "H") return Channel::proton;
  if (t.text == "C") return Channel::carbon;
  fail(line, t.col, "unknown channel '" + t.text + "' (expected H or C)");
}

RotationAxis axis_from(const Token& t, int line) {
  if (t.text == "x") return RotationAxis::x;
  if (t.text == "y") return RotationAxis::y;
  if (t.text == "-x") return RotationAxis::minus_x;
  if (t.text == "-y") return RotationAxis::minus_y;
  fail(line, t.col, "unknown axis '" + t.text + "' (expected x, y, -x or -y)");
}

std::pair<std::string, Token> key_value(const Token& t, int line) {
  const size_t eq = t.text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= t.text.size())
    fail(line, t.col, "expected key=value, got '" + t.text + "'");
  Token value{t.text.substr(eq + 1), t.col + static_cast<int>(eq) + 1};
  return {t.text.substr(0, eq), value};
}

void expect_arity(const std::vector<Token>& tok, size_t n, int line,
                  const std::string& usage) {
  if (tok.size() < n) fail(line, 1, "too few arguments; usage: " + usage);
  if (tok.size() > n)
    fail(line, tok[n].col, "unexpected token '" + tok[n].text + "'; usage: " + usage);
}

Instruction instruction_from(const std::vector<Token>& tok, int line) {
  const std::string& head = tok[0].text;
  if (head == "pulse") {
    expect_arity(tok, 4, line, "pulse <H|C> <angle deg> <axis>");
    PulseInstr p;
    p.channel = channel_from(tok[1], line);
    p.angle_deg = number_from(tok[2].text, line, tok[2].col);
    p.axis = axis_from(tok[3], line);
    return p;
  }
  if (head == "delay") {
    expect_arity(tok, 2, line, "delay <duration>");
    return DelayInstr{duration_from(tok[1], line)};
  }
  if (head == "cp") {
    expect_arity(tok, 2, line, "cp <duration>");
    return CpInstr{duration_from(tok[1], line)};
  }
  if (head == "dhh") {
    if (tok.size() < 3 || tok.size() > 4)
      fail(line, 1, "usage: dhh <delta|sigma> t=<duration> [sigma=|delta=<rf>]");
    DhhInstr d;
    if (tok[1].text == "delta")
      d.mode = DhhMode::delta;
    else if (tok[1].text == "sigma")
      d.mode = DhhMode::sigma;
    else
      fail(line, tok[1].col, "unknown dhh mode '" + tok[1].text +
                                 "' (expected delta or sigma)");
    bool have_t = false;
    for (size_t k = 2; k < tok.size(); ++k) {
      auto [key, value] = key_value(tok[k], line);
      if (key == "t") {
        if (have_t) fail(line, tok[k].col, "duplicate t= parameter");
        d.t = duration_from(value, line);
        have_t = true;
      } else if (key == "sigma" || key == "delta") {
        const char* free_key = d.mode == DhhMode::delta ? "sigma" : "delta";
        if (key != free_key)
          fail(line, tok[k].col,
               std::string(d.mode == DhhMode::delta
                               ? "delta mode pins delta; the free parameter is sigma"
                               : "sigma mode pins sigma; the free parameter is delta"));
        if (d.free_param) fail(line, tok[k].col, "duplicate rf parameter");
        d.free_param = rf_value_from(value.text, line, value.col);
      } else {
        fail(line, tok[k].col, "unknown dhh parameter '" + key + "'");
      }
    }
    if (!have_t) fail(line, 1, "dhh needs a t=<duration> parameter");
    return d;
  }
  if (head == "grad") {
    if (tok.size() == 1) return GradientInstr{GradientModel::diagonal};
    expect_arity(tok, 2, line, "grad [diagonal|coherence_order]");
    if (tok[1].text == "diagonal")
      return GradientInstr{GradientModel::diagonal};
    if (tok[1].text == "coherence_order")
      return GradientInstr{GradientModel::coherence_order};
    fail(line, tok[1].col, "unknown gradient model '" + tok[1].text +
                               "' (expected diagonal or coherence_order)");
  }
  if (head == "pps") {
    expect_arity(tok, 1, line, "pps");
    return PpsInstr{};
  }
  if (head == "acquire") {
    expect_arity(tok, 4, line, "acquire <H|C> <points> dwell=<seconds>");
    AcquireInstr a;
    a.channel = channel_from(tok[1], line);
    int pts = 0;
    {
      const char* begin = tok[2].text.data();
      const char* end = begin + tok[2].text.size();
      auto [ptr, ec] = std::from_chars(begin, end, pts);
      if (ec != std::errc() || ptr != end)
        fail(line, tok[2].col, "expected an integer point count");
    }
    if (pts < 2) fail(line, tok[2].col, "acquire needs at least 2 points");
    a.points = pts;
    auto [key, value] = key_value(tok[3], line);
    if (key != "dwell")
      fail(line, tok[3].col, "expected dwell=<seconds>");
    a.dwell_s = number_from(value.text, line, value.col);
    if (a.dwell_s <= 0.0) fail(line, value.col, "dwell must be positive");
    return a;
  }
  fail(line, tok[0].col,
       "unknown instruction '" + head +
           "' (expected pulse, delay, cp, dhh, grad, pps or acquire)");
}

std::string duration_text(const Duration& d) {
  return format_double(d.value) + (d.per_j ? "/J" : "");
}

std::string rf_text(const RfValue& v) {
  return format_double(v.value) + (v.in_j ? "J" : "");
}

const char* channel_text(Channel c) {
  return c == Channel::proton ? "H" : "C";
}

const char* axis_text(RotationAxis a) {
  switch (a) {
    case RotationAxis::x: return "x";
    case RotationAxis::y: return "y";
    case RotationAxis::minus_x: return "-x";
    case RotationAxis::minus_y: return "-y";
  }
  return "?";
}

}  // namespace

PulseProgram parse(std::string_view text, std::string name) {
  PulseProgram prog;
  prog.name = std::move(name);
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                       : eol - pos);
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = tokenize(line);
    if (!tokens.empty())
      prog.instructions.push_back(instruction_from(tokens, lineno));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return prog;
}

std::string pretty_print_instruction(const Instruction& instr) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PulseInstr>) {
          return std::string("pulse ") + channel_text(v.channel) + " " +
                 format_double(v.angle_deg) + " " + axis_text(v.axis);
        } else if constexpr (std::is_same_v<T, DelayInstr>) {
          return "delay " + duration_text(v.t);
        } else if constexpr (std::is_same_v<T, CpInstr>) {
          return "cp " + duration_text(v.t);
        } else if constexpr (std::is_same_v<T, DhhInstr>) {
          std::string out = std::string("dhh ") +
                            (v.mode == DhhMode::delta ? "delta" : "sigma") +
                            " t=" + duration_text(v.t);
          if (v.free_param)
            out += std::string(" ") +
                   (v.mode == DhhMode::delta ? "sigma=" : "delta=") +
                   rf_text(*v.free_param);
          return out;
        } else if constexpr (std::is_same_v<T, GradientInstr>) {
          return v.model == GradientModel::diagonal ? "grad diagonal"
                                                    : "grad coherence_order";
        } else if constexpr (std::is_same_v<T, PpsInstr>) {
          return "pps";
        } else {
          return std::string("acquire ") + channel_text(v.channel) + " " +
                 std::to_string(v.points) + " dwell=" + format_double(v.dwell_s);
        }
      },
      instr);
}

std::string pretty_print(const PulseProgram& prog) {
  std::string out;
  for (const auto& instr : prog.instructions) {
    out += pretty_print_instruction(instr);
    out += '\n';
  }
  return out;
}

PulseProgram builtin_program(BellKind kind) {
  const Duration cp_len{0.5, true};                      // pi/J
  const Duration dhh_len{std::sqrt(2.0) / 2.0, true};    // pi*sqrt(2)/J
  const RfValue sigma_5j{5.0, true};
  const RfValue delta_0{0.0, false};

  auto pulse = [](Channel ch, double deg) {
    return PulseInstr{ch, deg, RotationAxis::y};
  };

  PulseProgram prog;
  prog.name = std::string("bell_") + [&] {
    switch (kind) {
      case BellKind::singlet: return "s0";
      case BellKind::triplet0: return "t0";
      case BellKind::psi_plus: return "psi_plus";
      case BellKind::psi_minus: return "psi_minus";
    }
    throw ValidationError("unknown Bell kind");
  }();

  // step 1: equalize the two z polarizations onto (eps1+eps2)/2
  prog.instructions = {
      pulse(Channel::proton, 90.0),  pulse(Channel::carbon, 90.0),
      CpInstr{cp_len},               pulse(Channel::proton, -90.0),
      pulse(Channel::carbon, -90.0), GradientInstr{GradientModel::diagonal},
      PpsInstr{},  // step 2: pseudo-pure |uu>
  };

  // step 3: rotate |uu> onto the kind's x product state, then the matched
  // DHH pulse; all but the singlet need the final rotation back to z.
  const bool up1 = kind == BellKind::triplet0 || kind == BellKind::psi_plus;
  const bool up2 = kind == BellKind::singlet || kind == BellKind::psi_plus;
  prog.instructions.push_back(pulse(Channel::proton, up1 ? 90.0 : -90.0));
  prog.instructions.push_back(pulse(Channel::carbon, up2 ? 90.0 : -90.0));
  const bool zero_quantum =
      kind == BellKind::singlet || kind == BellKind::triplet0;
  if (zero_quantum)
    prog.instructions.push_back(
        DhhInstr{DhhMode::delta, dhh_len, sigma_5j});
  else
    prog.instructions.push_back(
        DhhInstr{DhhMode::sigma, dhh_len, delta_0});
  if (kind != BellKind::singlet) {
    prog.instructions.push_back(pulse(Channel::proton, -90.0));
    prog.instructions.push_back(pulse(Channel::carbon, -90.0));
  }
  return prog;
}

}  // namespace spinpair
