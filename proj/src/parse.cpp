#include "postsim/parse.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "postsim/errors.hpp"

namespace postsim {

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenize(const std::string &line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

class LineParser {
  public:
    LineParser(int line_number, std::vector<Token> tokens)
        : line_(line_number), tokens_(std::move(tokens)) {}

    const Token &next(const char *what) {
        if (pos_ >= tokens_.size()) {
            int col = tokens_.empty() ? 1 : tokens_.back().column + static_cast<int>(tokens_.back().text.size());
            throw SyntaxError(line_, col, std::string("expected ") + what);
        }
        return tokens_[pos_++];
    }

    int qubit(const char *what = "qubit index") {
        const Token &t = next(what);
        char *end = nullptr;
        long v = std::strtol(t.text.c_str(), &end, 10);
        if (end != t.text.c_str() + t.text.size() || v < 0) {
            throw SyntaxError(line_, t.column, std::string("expected ") + what + ", got '" + t.text + "'");
        }
        return static_cast<int>(v);
    }

    Amplitude complex_entry() {
        const Token &t = next("matrix entry re,im");
        std::size_t comma = t.text.find(',');
        if (comma == std::string::npos) {
            throw SyntaxError(line_, t.column, "matrix entry must be re,im");
        }
        return {real_part(t, t.text.substr(0, comma), 0),
                real_part(t, t.text.substr(comma + 1), static_cast<int>(comma) + 1)};
    }

    void literal(const char *text) {
        const Token &t = next(text);
        if (t.text != text) {
            throw SyntaxError(line_, t.column, std::string("expected '") + text + "', got '" + t.text + "'");
        }
    }

    bool at_end() const { return pos_ >= tokens_.size(); }

    void finish() {
        if (!at_end()) {
            throw SyntaxError(line_, tokens_[pos_].column, "unexpected trailing token '" + tokens_[pos_].text + "'");
        }
    }

    int line() const { return line_; }
    int column_here() const { return pos_ < tokens_.size() ? tokens_[pos_].column : 1; }

  private:
    double real_part(const Token &t, const std::string &s, int offset) {
        char *end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) {
            throw SyntaxError(line_, t.column + offset, "bad number '" + s + "'");
        }
        return v;
    }

    int line_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_complex(const Amplitude &a) { return fmt_double(a.real()) + "," + fmt_double(a.imag()); }

}  // namespace

Circuit parse_circuit(const std::string &text) {
    std::istringstream in(text);
    std::string raw_line;
    int line_number = 0;
    bool saw_header = false;
    Circuit circuit;
    std::optional<int> flag, accept;

    while (std::getline(in, raw_line)) {
        ++line_number;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
        std::vector<Token> tokens = tokenize(raw_line);
        if (tokens.empty()) continue;
        LineParser line(line_number, std::move(tokens));
        const Token &head = line.next("directive");

        if (!saw_header) {
            if (head.text != "qubits") {
                throw SyntaxError(line_number, head.column, "first directive must be 'qubits <n>'");
            }
            int n = line.qubit("qubit count");
            line.finish();
            if (n < 1 || n > 62) throw ValidationError("line " + std::to_string(line_number) + ": qubit count out of range");
            circuit = Circuit(n);
            saw_header = true;
            continue;
        }

        try {
            if (head.text == "qubits") {
                throw SyntaxError(line_number, head.column, "duplicate 'qubits' directive");
            } else if (head.text == "H") {
                circuit.add(Gate::h(line.qubit()));
            } else if (head.text == "X") {
                circuit.add(Gate::x(line.qubit()));
            } else if (head.text == "CNOT") {
                int c = line.qubit(), t = line.qubit();
                circuit.add(Gate::cnot(c, t));
            } else if (head.text == "TOF") {
                int a = line.qubit(), b = line.qubit(), t = line.qubit();
                circuit.add(Gate::toffoli(a, b, t));
            } else if (head.text == "CH") {
                int c = line.qubit(), t = line.qubit();
                circuit.add(Gate::ch(c, t));
            } else if (head.text == "U1") {
                int q = line.qubit();
                std::array<Amplitude, 4> m;
                for (Amplitude &a : m) a = line.complex_entry();
                circuit.add(Gate::u1(q, m));
            } else if (head.text == "U2") {
                int q1 = line.qubit(), q2 = line.qubit();
                std::array<Amplitude, 16> m;
                for (Amplitude &a : m) a = line.complex_entry();
                circuit.add(Gate::u2(q1, q2, m));
            } else if (head.text == "ORACLE") {
                int target = line.qubit("target qubit");
                std::vector<int> inputs;
                for (;;) {
                    const Token &t = line.next("input qubit or ':'");
                    if (t.text == ":") break;
                    char *end = nullptr;
                    long v = std::strtol(t.text.c_str(), &end, 10);
                    if (end != t.text.c_str() + t.text.size() || v < 0) {
                        throw SyntaxError(line_number, t.column, "expected input qubit or ':', got '" + t.text + "'");
                    }
                    inputs.push_back(static_cast<int>(v));
                }
                const Token &bits = line.next("truth table bits");
                std::vector<std::uint8_t> table;
                table.reserve(bits.text.size());
                for (std::size_t i = 0; i < bits.text.size(); ++i) {
                    char ch = bits.text[i];
                    if (ch != '0' && ch != '1') {
                        throw SyntaxError(line_number, bits.column + static_cast<int>(i), "truth table bits must be 0 or 1");
                    }
                    table.push_back(static_cast<std::uint8_t>(ch - '0'));
                }
                circuit.add(Gate::oracle(std::move(inputs), target, std::move(table)));
            } else if (head.text == "post") {
                int q = line.qubit();
                line.literal("=");
                int b = line.qubit("bit");
                if (b != 0 && b != 1) throw SyntaxError(line_number, line.column_here(), "postselection bit must be 0 or 1");
                circuit.postselect(q, b);
            } else if (head.text == "flag") {
                flag = line.qubit();
            } else if (head.text == "accept") {
                accept = line.qubit();
            } else {
                throw SyntaxError(line_number, head.column, "unknown directive '" + head.text + "'");
            }
        } catch (const ValidationError &e) {
            throw ValidationError("line " + std::to_string(line_number) + ": " + e.what());
        }
        line.finish();
    }

    if (!saw_header) throw SyntaxError(1, 1, "missing 'qubits <n>' header");
    if (flag) circuit.flag_qubit = *flag;
    if (accept) circuit.accept_qubit = *accept;
    circuit.validate();
    return circuit;
}

std::string render_circuit(const Circuit &circuit) {
    std::ostringstream out;
    out << "qubits " << circuit.num_qubits << "\n";
    std::size_t next_post = 0;
    auto emit_posts_at = [&](std::size_t position) {
        while (next_post < circuit.postselections.size() &&
               circuit.postselections[next_post].position == position) {
            const Postselection &p = circuit.postselections[next_post++];
            out << "post " << p.qubit << " = " << p.bit << "\n";
        }
    };
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        emit_posts_at(i);
        const Gate &g = circuit.gates[i];
        switch (g.kind) {
            case GateKind::H:
            case GateKind::X:
                out << gate_kind_name(g.kind) << " " << g.qubits[0] << "\n";
                break;
            case GateKind::CNOT:
            case GateKind::CH:
                out << gate_kind_name(g.kind) << " " << g.qubits[0] << " " << g.qubits[1] << "\n";
                break;
            case GateKind::Toffoli:
                out << "TOF " << g.qubits[0] << " " << g.qubits[1] << " " << g.qubits[2] << "\n";
                break;
            case GateKind::U1:
                out << "U1 " << g.qubits[0];
                for (const Amplitude &a : g.mat1) out << " " << fmt_complex(a);
                out << "\n";
                break;
            case GateKind::U2:
                out << "U2 " << g.qubits[0] << " " << g.qubits[1];
                for (const Amplitude &a : g.mat2) out << " " << fmt_complex(a);
                out << "\n";
                break;
            case GateKind::Oracle: {
                out << "ORACLE " << g.target();
                for (int i2 = 0; i2 < g.num_inputs; ++i2) out << " " << g.qubits[i2];
                out << " : ";
                for (std::uint8_t b : *g.table) out << static_cast<int>(b);
                out << "\n";
                break;
            }
            case GateKind::CondH:
                throw UnsupportedGate("CONDH gates have no text form");
        }
    }
    emit_posts_at(circuit.gates.size());
    out << "flag " << circuit.flag_qubit << "\n";
    out << "accept " << circuit.accept_qubit << "\n";
    return out.str();
}

MajorityInstance parse_truth_table(const std::string &text) {
    std::istringstream in(text);
    std::string raw_line;
    int line_number = 0;
    int n = -1;
    std::vector<std::uint8_t> table;
    while (std::getline(in, raw_line)) {
        ++line_number;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
        std::vector<Token> tokens = tokenize(raw_line);
        if (tokens.empty()) continue;
        LineParser line(line_number, std::move(tokens));
        if (n < 0) {
            line.literal("n");
            n = line.qubit("table width");
            line.finish();
            continue;
        }
        if (!table.empty()) throw SyntaxError(line_number, 1, "unexpected extra line");
        const Token &bits = line.next("table bits");
        line.finish();
        for (std::size_t i = 0; i < bits.text.size(); ++i) {
            char ch = bits.text[i];
            if (ch != '0' && ch != '1') {
                throw SyntaxError(line_number, bits.column + static_cast<int>(i), "table bits must be 0 or 1");
            }
            table.push_back(static_cast<std::uint8_t>(ch - '0'));
        }
    }
    if (n < 0) throw SyntaxError(1, 1, "missing 'n <n>' header");
    if (table.empty()) throw SyntaxError(2, 1, "missing table bits line");
    return {n, std::move(table)};
}

std::string render_truth_table(const MajorityInstance &inst) {
    std::string out = "n " + std::to_string(inst.n) + "\n";
    for (std::uint8_t b : inst.table) out += static_cast<char>('0' + b);
    out += "\n";
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace postsim
