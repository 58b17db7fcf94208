#include "csflock/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "csflock/errors.hpp"

namespace csflock::harness {

namespace {

std::string summarize(const std::vector<Diagnostic>& diags) {
    std::ostringstream out;
    for (std::size_t k = 0; k < diags.size(); ++k) {
        if (k) out << '\n';
        if (diags[k].line) out << "line " << diags[k].line << ": ";
        out << diags[k].message;
    }
    return out.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    T value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value)) return std::nullopt;
    return value;
}

struct Line {
    std::size_t number;
    std::string text;
};

struct Section {
    std::string kind;  // "" for lines before the first header
    std::string arg;
    std::size_t line = 0;
    std::vector<Line> body;
};

struct ParsedDocument {
    std::optional<std::size_t> n;
    dynamics::FlockParams params;
    std::uint64_t steps = 500;
    double threshold = 1e-3;
    Mode mode = Mode::Certificate;
    std::optional<double> lambda;
    std::vector<topology::Digraph> graphs;
    std::vector<std::string> ids;
    std::optional<topology::Schedule> schedule;
    std::variant<RandomInit, ExplicitInit> init = RandomInit{};
    OutputPaths outputs;
};

class Parser {
public:
    explicit Parser(std::string_view text) { lex(text); }

    ParsedDocument parse() {
        ParsedDocument doc;
        std::map<std::string, std::size_t> seen;
        for (const auto& sec : sections_) {
            if (sec.kind.empty() || sec.kind == "graph") continue;
            if (auto [it, fresh] = seen.emplace(sec.kind, sec.line); !fresh)
                error(sec.line, "duplicate [" + sec.kind + "] section (first at line " +
                                    std::to_string(it->second) + ")");
        }

        for (const auto& sec : sections_)
            if (sec.kind.empty()) header(sec, doc);
        for (const auto& sec : sections_)
            if (sec.kind == "params") params(sec, doc);
        for (const auto& sec : sections_) {
            if (sec.kind.empty() || sec.kind == "params") continue;
            if (sec.kind != "graph" && sec.kind != "signal" && sec.kind != "init" &&
                sec.kind != "output")
                error(sec.line, "unknown section [" + sec.kind + "]");
        }

        if (!doc.n) {
            error(0, "agent count N is not given (use a header line `N <count>` or `N = <count>` in [params])");
            fail();
        }
        doc.params.n = *doc.n;

        for (const auto& sec : sections_)
            if (sec.kind == "graph") graph(sec, doc);
        if (doc.graphs.empty()) error(0, "no [graph <id>] section");

        for (const auto& sec : sections_) {
            if (sec.kind == "signal") signal(sec, doc);
            if (sec.kind == "init") init(sec, doc);
            if (sec.kind == "output") output(sec, doc);
        }
        if (!doc.schedule && !doc.graphs.empty()) {
            topology::CyclicSchedule c;
            for (std::size_t k = 0; k < doc.graphs.size(); ++k) c.order.push_back(k);
            doc.schedule = c;
        }
        fail();
        return doc;
    }

private:
    void error(std::size_t line, std::string msg) { diags_.push_back({line, std::move(msg)}); }

    void fail() {
        if (!diags_.empty()) throw ConfigError(diags_);
    }

    void lex(std::string_view text) {
        sections_.push_back({});
        std::size_t number = 0;
        while (!text.empty()) {
            const auto eol = text.find('\n');
            std::string_view raw = text.substr(0, eol);
            text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
            ++number;
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            const auto line = trim(raw);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    error(number, "unterminated section header");
                    continue;
                }
                auto words = split_words(line.substr(1, line.size() - 2));
                Section sec;
                sec.line = number;
                if (words.empty()) {
                    error(number, "empty section header");
                } else {
                    sec.kind = words[0];
                    if (words.size() > 2)
                        error(number, "section header takes at most one argument");
                    if (words.size() >= 2) sec.arg = words[1];
                }
                if (sec.kind == "graph" && sec.arg.empty()) error(number, "[graph] needs an id");
                if (sec.kind != "graph" && !sec.arg.empty())
                    error(number, "[" + sec.kind + "] takes no argument");
                sections_.push_back(std::move(sec));
                continue;
            }
            sections_.back().body.push_back({number, std::string(line)});
        }
    }

    // Splits `key = value`; reports and returns nullopt when malformed.
    std::optional<std::pair<std::string, std::string>> key_value(const Line& l) {
        const auto eq = l.text.find('=');
        if (eq == std::string::npos) {
            error(l.number, "expected `key = value`");
            return std::nullopt;
        }
        std::string key(trim(std::string_view(l.text).substr(0, eq)));
        std::string value(trim(std::string_view(l.text).substr(eq + 1)));
        if (key.empty() || value.empty()) {
            error(l.number, "expected `key = value`");
            return std::nullopt;
        }
        return std::pair{key, value};
    }

    template <class T>
    std::optional<T> number(const Line& l, const std::string& what, const std::string& text) {
        auto v = parse_number<T>(text);
        if (!v) error(l.number, "invalid value for " + what + ": `" + text + "`");
        return v;
    }

    void set_n(ParsedDocument& doc, std::size_t n, std::size_t line) {
        if (n < 2) {
            error(line, "N must be at least 2");
            return;
        }
        if (doc.n && *doc.n != n) {
            error(line, "N = " + std::to_string(n) + " conflicts with earlier N = " + std::to_string(*doc.n));
            return;
        }
        doc.n = n;
    }

    void header(const Section& sec, ParsedDocument& doc) {
        for (const auto& l : sec.body) {
            auto words = split_words(l.text);
            if (words.size() == 2 && words[0] == "N") {
                if (auto n = number<std::size_t>(l, "N", words[1])) set_n(doc, *n, l.number);
            } else {
                error(l.number, "expected `N <count>` or a section header");
            }
        }
    }

    void params(const Section& sec, ParsedDocument& doc) {
        for (const auto& l : sec.body) {
            auto kv = key_value(l);
            if (!kv) continue;
            const auto& [key, value] = *kv;
            if (key == "h") {
                if (auto v = number<double>(l, key, value)) {
                    if (*v <= 0.0) error(l.number, "h must be positive");
                    doc.params.h = *v;
                }
            } else if (key == "beta") {
                if (auto v = number<double>(l, key, value)) {
                    if (*v < 0.0) error(l.number, "beta must be nonnegative");
                    doc.params.beta = *v;
                }
            } else if (key == "N") {
                if (auto v = number<std::size_t>(l, key, value)) set_n(doc, *v, l.number);
            } else if (key == "d") {
                if (auto v = number<std::size_t>(l, key, value)) {
                    if (*v == 0) error(l.number, "d must be at least 1");
                    doc.params.d = *v;
                }
            } else if (key == "steps") {
                if (auto v = number<std::uint64_t>(l, key, value)) {
                    if (*v == 0) error(l.number, "steps must be at least 1");
                    doc.steps = *v;
                }
            } else if (key == "threshold") {
                if (auto v = number<double>(l, key, value)) {
                    if (*v <= 0.0) error(l.number, "threshold must be positive");
                    doc.threshold = *v;
                }
            } else if (key == "mode") {
                if (value == "certificate")
                    doc.mode = Mode::Certificate;
                else if (value == "exploration")
                    doc.mode = Mode::Exploration;
                else
                    error(l.number, "mode must be `certificate` or `exploration`");
            } else if (key == "lambda") {
                if (value == "auto") {
                    doc.lambda.reset();
                } else if (auto v = number<double>(l, key, value)) {
                    if (*v < 1.0) error(l.number, "lambda must be at least 1");
                    doc.lambda = *v;
                }
            } else {
                error(l.number, "unknown key `" + key + "` in [params]");
            }
        }
    }

    void graph(const Section& sec, ParsedDocument& doc) {
        if (std::find(doc.ids.begin(), doc.ids.end(), sec.arg) != doc.ids.end()) {
            error(sec.line, "graph `" + sec.arg + "` defined twice");
            return;
        }
        const std::size_t n = *doc.n;
        topology::Digraph g(n);
        for (const auto& l : sec.body) {
            auto words = split_words(l.text);
            if (words.size() != 2) {
                error(l.number, "arc line must be `<j> <i>` (j influences i)");
                continue;
            }
            auto j = parse_number<std::size_t>(words[0]);
            auto i = parse_number<std::size_t>(words[1]);
            if (!j || !i) {
                error(l.number, "arc endpoints must be agent numbers");
                continue;
            }
            if (*j < 1 || *j > n || *i < 1 || *i > n) {
                error(l.number, "arc (" + words[0] + ", " + words[1] + ") outside agents 1.." +
                                    std::to_string(n));
                continue;
            }
            if (*i == *j) {
                error(l.number, "self-loop (" + words[0] + ", " + words[1] + ") in graph `" + sec.arg + "`");
                continue;
            }
            g.add_arc(*j - 1, *i - 1);
        }
        doc.graphs.push_back(std::move(g));
        doc.ids.push_back(sec.arg);
    }

    std::optional<std::size_t> graph_index(const ParsedDocument& doc, const std::string& id,
                                           std::size_t line) {
        auto it = std::find(doc.ids.begin(), doc.ids.end(), id);
        if (it == doc.ids.end()) {
            error(line, "signal refers to undefined graph `" + id + "`");
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - doc.ids.begin());
    }

    void signal(const Section& sec, ParsedDocument& doc) {
        std::optional<topology::CyclicSchedule> cyc;
        topology::ExplicitSchedule expl;
        for (const auto& l : sec.body) {
            auto words = split_words(l.text);
            if (words.front() == "cycle") {
                if (cyc) {
                    error(l.number, "only one `cycle` line is allowed");
                    continue;
                }
                topology::CyclicSchedule c;
                std::size_t k = 1;
                for (; k < words.size() && words[k] != "dwell"; ++k)
                    if (auto idx = graph_index(doc, words[k], l.number)) c.order.push_back(*idx);
                if (k + 1 == words.size()) {
                    error(l.number, "`dwell` needs a step count");
                } else if (k + 2 == words.size()) {
                    auto dwell = number<std::uint64_t>(l, "dwell", words[k + 1]);
                    if (dwell && *dwell == 0) error(l.number, "dwell must be at least one step");
                    if (dwell) c.dwell = *dwell;
                } else if (k < words.size()) {
                    error(l.number, "unexpected tokens after dwell count");
                }
                if (k == 1) error(l.number, "`cycle` needs at least one graph id");
                cyc = std::move(c);
            } else if (words.front() == "at") {
                if (words.size() != 3) {
                    error(l.number, "expected `at <step> <graph>`");
                    continue;
                }
                auto t = number<std::uint64_t>(l, "step", words[1]);
                auto idx = graph_index(doc, words[2], l.number);
                if (!t || !idx) continue;
                if (!expl.changes.empty() && *t <= expl.changes.back().first) {
                    error(l.number, "`at` steps must be strictly increasing");
                    continue;
                }
                expl.changes.emplace_back(*t, *idx);
            } else {
                error(l.number, "expected `cycle ...` or `at <step> <graph>`");
            }
        }
        if (cyc && !expl.changes.empty()) {
            error(sec.line, "[signal] mixes `cycle` and `at` lines");
        } else if (cyc) {
            doc.schedule = std::move(*cyc);
        } else if (!expl.changes.empty()) {
            if (expl.changes.front().first != 0) error(sec.line, "explicit schedule must start with `at 0 ...`");
            doc.schedule = std::move(expl);
        } else {
            error(sec.line, "[signal] is empty");
        }
    }

    void init(const Section& sec, ParsedDocument& doc) {
        const auto n = static_cast<Eigen::Index>(*doc.n);
        const auto d = static_cast<Eigen::Index>(doc.params.d);
        RandomInit random;
        dynamics::Matrix x = dynamics::Matrix::Constant(n, d, std::nan(""));
        dynamics::Matrix v = x;
        std::set<std::pair<int, Eigen::Index>> given;
        bool explicit_lines = false;
        for (const auto& l : sec.body) {
            auto words = split_words(l.text);
            if (words.front() == "position" || words.front() == "velocity") {
                explicit_lines = true;
                const int which = words.front() == "position" ? 0 : 1;
                if (words.size() != static_cast<std::size_t>(d) + 2) {
                    error(l.number, "expected `" + words.front() + " <agent>` followed by " +
                                        std::to_string(d) + " coordinates");
                    continue;
                }
                auto agent = number<std::size_t>(l, "agent", words[1]);
                if (!agent) continue;
                if (*agent < 1 || *agent > *doc.n) {
                    error(l.number, "agent " + words[1] + " outside 1.." + std::to_string(*doc.n));
                    continue;
                }
                const auto row = static_cast<Eigen::Index>(*agent - 1);
                if (!given.emplace(which, row).second) {
                    error(l.number, words.front() + " of agent " + words[1] + " given twice");
                    continue;
                }
                auto& target = which == 0 ? x : v;
                for (Eigen::Index c = 0; c < d; ++c)
                    if (auto val = number<double>(l, "coordinate", words[2 + c])) target(row, c) = *val;
                continue;
            }
            auto kv = key_value(l);
            if (!kv) continue;
            const auto& [key, value] = *kv;
            if (key == "seed") {
                if (auto s = number<std::uint64_t>(l, key, value)) random.seed = *s;
            } else if (key == "position_interval" || key == "velocity_interval") {
                if (auto len = number<double>(l, key, value)) {
                    if (*len <= 0.0) error(l.number, key + " must be positive");
                    (key == "position_interval" ? random.position_interval : random.velocity_interval) = *len;
                }
            } else {
                error(l.number, "unknown key `" + key + "` in [init]");
            }
        }
        if (!explicit_lines) {
            doc.init = random;
            return;
        }
        if (given.size() != static_cast<std::size_t>(2 * n)) {
            error(sec.line, "explicit [init] must give position and velocity of every agent");
            return;
        }
        doc.init = ExplicitInit{std::move(x), std::move(v)};
    }

    void output(const Section& sec, ParsedDocument& doc) {
        for (const auto& l : sec.body) {
            auto kv = key_value(l);
            if (!kv) continue;
            const auto& [key, value] = *kv;
            if (key == "trajectory")
                doc.outputs.trajectory = value;
            else if (key == "metrics")
                doc.outputs.metrics = value;
            else if (key == "certificate")
                doc.outputs.certificate = value;
            else
                error(l.number, "unknown key `" + key + "` in [output]");
        }
    }

    std::vector<Section> sections_;
    std::vector<Diagnostic> diags_;
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({{0, "cannot open " + path.string()}});
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

namespace {

std::vector<Diagnostic>& sorted_by_line(std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    return diagnostics;
}

}  // namespace

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(sorted_by_line(diagnostics))), diagnostics_(std::move(diagnostics)) {}

ExperimentConfig parse_config(std::string_view text) {
    ParsedDocument doc = Parser(text).parse();
    return ExperimentConfig{
        .params = doc.params,
        .signal = topology::SwitchingSignal(doc.graphs, *doc.schedule, doc.ids),
        .steps = doc.steps,
        .init = std::move(doc.init),
        .mode = doc.mode,
        .lambda = doc.lambda,
        .threshold = doc.threshold,
        .outputs = doc.outputs,
    };
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

GraphDocument parse_graph_document(std::string_view text) {
    ParsedDocument doc = Parser(text).parse();
    GraphDocument out;
    out.n = *doc.n;
    out.graphs = doc.graphs;
    out.ids = doc.ids;
    out.signal.emplace(doc.graphs, *doc.schedule, doc.ids);
    return out;
}

GraphDocument load_graph_document(const std::filesystem::path& path) {
    return parse_graph_document(read_file(path));
}

}  // namespace csflock::harness
