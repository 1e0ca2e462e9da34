#include "qmodal/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qmodal {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

void dump_json_impl(const json& j, std::string& out, int depth) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",\n";
                first = false;
                out += inner + json(key).dump() + ": ";
                dump_json_impl(value, out, depth + 1);
            }
            out += "\n" + indent + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ",\n";
                first = false;
                out += inner;
                dump_json_impl(value, out, depth + 1);
            }
            out += "\n" + indent + "]";
            return;
        }
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_json(const json& j) {
    std::string out;
    dump_json_impl(j, out, 0);
    out += "\n";
    return out;
}

json matrix_to_json(const ComplexMatrix& m) {
    json re = json::array();
    json im = json::array();
    for (const auto& z : m.data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const json& j) {
    try {
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        const auto re = j.at("re").get<std::vector<double>>();
        const auto im = j.at("im").get<std::vector<double>>();
        if (rows < 0 || cols < 0 ||
            re.size() != static_cast<std::size_t>(rows) * cols || im.size() != re.size())
            throw ParseError("matrix entry arrays do not match rows*cols");
        std::vector<complexd> entries(re.size());
        for (std::size_t k = 0; k < re.size(); ++k) entries[k] = complexd(re[k], im[k]);
        ComplexMatrix m(rows, cols, std::move(entries));
        if (!m.all_finite()) throw ParseError("matrix has non-finite entries");
        return m;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad matrix JSON: ") + e.what());
    }
}

json context_to_json(const Context& ctx) {
    return json{{"id", ctx.id},
                {"dim", ctx.dim()},
                {"basis", matrix_to_json(ctx.basis)},
                {"labels", ctx.outcome_labels}};
}

Context context_from_json(const json& j) {
    try {
        auto id = j.at("id").get<std::string>();
        const int dim = j.at("dim").get<int>();
        ComplexMatrix basis = matrix_from_json(j.at("basis"));
        auto labels = j.value("labels", std::vector<std::string>{});
        if (basis.rows() != dim || basis.cols() != dim)
            throw ParseError("context dim does not match basis shape");
        return make_context(std::move(id), std::move(basis), std::move(labels));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad context JSON: ") + e.what());
    }
}

json fit_result_to_json(const FitResult& result) {
    return json{{"residual", result.residual},
                {"converged", result.converged},
                {"restarts", result.restarts_run},
                {"matrix", matrix_to_json(result.best_matrix)},
                {"per_restart", result.per_restart_residuals}};
}

std::string outcome_tuple_key(const std::vector<int>& tuple) {
    std::string key = "(";
    for (std::size_t k = 0; k < tuple.size(); ++k) {
        if (k > 0) key += ",";
        key += std::to_string(tuple[k]);
    }
    return key + ")";
}

json sequence_result_to_json(const SequenceResult& result) {
    json frequencies = json::object();
    for (const auto& [tuple, freq] : result.empirical_frequencies())
        frequencies[outcome_tuple_key(tuple)] = freq;
    return json{{"shots", result.shots},
                {"chain", result.chain_ids},
                {"frequencies", std::move(frequencies)}};
}

std::string sequence_result_to_csv(const SequenceResult& result) {
    std::string out = "outcome_tuple,count,frequency\n";
    for (const auto& [tuple, count] : result.counts) {
        out += "\"" + outcome_tuple_key(tuple) + "\"," + std::to_string(count) + "," +
               format_double(static_cast<double>(count) / static_cast<double>(result.shots)) +
               "\n";
    }
    return out;
}

json spin_representation_to_json(const SpinRepresentation& rep) {
    return json{{"j", format_spin(rep.twoj)},
                {"dim", rep.dim},
                {"jx", matrix_to_json(rep.jx)},
                {"jy", matrix_to_json(rep.jy)},
                {"jz", matrix_to_json(rep.jz)}};
}

std::string transition_to_csv(const TransitionMatrix& t) {
    std::string out = "# source=" + t.source_context + " target=" + t.target_context + "\n";
    for (int i = 0; i < t.dim; ++i) {
        for (int j = 0; j < t.dim; ++j) {
            if (j > 0) out += ",";
            out += format_double(t(i, j));
        }
        out += "\n";
    }
    return out;
}

json transition_to_json(const TransitionMatrix& t) {
    json rows = json::array();
    for (int i = 0; i < t.dim; ++i) {
        json row = json::array();
        for (int j = 0; j < t.dim; ++j) row.push_back(t(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"source", t.source_context}, {"target", t.target_context},
                {"dim", t.dim}, {"probs", std::move(rows)}};
}

DoublyStochasticTarget target_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("bad CSV cell: '" + cell + "'");
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("empty CSV target");
    const int n = static_cast<int>(rows.size());
    DoublyStochasticTarget target{n, {}};
    target.entries.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw ParseError("CSV target is not square");
        target.entries.insert(target.entries.end(), row.begin(), row.end());
    }
    return target;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

}  // namespace qmodal
