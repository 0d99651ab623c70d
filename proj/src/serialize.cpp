#include "fmising/serialize.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace fmising {

namespace {

using nlohmann::json;

json matrix_rows(const SymMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.n; ++i) {
        json row = json::array();
        for (int j = 0; j < m.n; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> flatten_rows(const json& rows, int n, const char* what) {
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) + " rows");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument(std::string(what) + ": ragged matrix");
        for (const json& v : row) flat.push_back(v.get<double>());
    }
    return flat;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

std::string to_json(const IsingModel& model) {
    json doc;
    doc["n"] = model.n;
    doc["c"] = model.c;
    doc["h"] = model.h;
    doc["j"] = matrix_rows(model.j);
    return doc.dump();
}

IsingModel model_from_json(const std::string& text) {
    const json doc = json::parse(text);
    IsingModel model;
    model.n = doc.at("n").get<int>();
    if (model.n < 1) throw std::invalid_argument("model: dimension must be positive");
    model.c = doc.at("c").get<double>();
    model.h = doc.at("h").get<std::vector<double>>();
    if (model.h.size() != static_cast<std::size_t>(model.n))
        throw std::invalid_argument("model: field vector length mismatch");

    const std::vector<double> flat = flatten_rows(doc.at("j"), model.n, "model");
    for (int i = 0; i < model.n; ++i) {
        const double diag = flat[static_cast<std::size_t>(i) * model.n + i];
        if (std::abs(diag) > 1e-12)
            throw std::invalid_argument("model: coupling diagonal must be zero");
        for (int j = i + 1; j < model.n; ++j) {
            const double a = flat[static_cast<std::size_t>(i) * model.n + j];
            const double b = flat[static_cast<std::size_t>(j) * model.n + i];
            if (std::abs(a - b) > 1e-12)
                throw std::invalid_argument("model: coupling matrix is not symmetric");
        }
    }
    model.j = SymMatrix::from_entries(model.n, flat);
    for (int i = 0; i < model.n; ++i) model.j(i, i) = 0.0;
    return model;
}

std::string to_json(const FmParams& params) {
    json doc;
    doc["n"] = params.n;
    doc["k"] = params.k;
    doc["sign"] = to_string(params.sign);
    doc["w0"] = params.w0;
    doc["w"] = params.w;
    json rows = json::array();
    for (int i = 0; i < params.n; ++i) {
        json row = json::array();
        for (int kk = 0; kk < params.k; ++kk) row.push_back(params.vat(i, kk));
        rows.push_back(std::move(row));
    }
    doc["v"] = rows;
    return doc.dump();
}

FmParams fm_from_json(const std::string& text) {
    const json doc = json::parse(text);
    FmParams p;
    p.n = doc.at("n").get<int>();
    p.k = doc.at("k").get<int>();
    if (p.n < 1 || p.k < 1) throw std::invalid_argument("fm: n and k must be positive");
    const std::string sign = doc.at("sign").get<std::string>();
    if (sign == "positive")
        p.sign = FmSign::positive;
    else if (sign == "negative")
        p.sign = FmSign::negative;
    else
        throw std::invalid_argument("fm: sign must be \"positive\" or \"negative\"");
    p.w0 = doc.at("w0").get<double>();
    p.w = doc.at("w").get<std::vector<double>>();
    if (p.w.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("fm: linear term length mismatch");

    const json& rows = doc.at("v");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(p.n))
        throw std::invalid_argument("fm: expected one factor row per variable");
    p.v.reserve(static_cast<std::size_t>(p.n) * p.k);
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != static_cast<std::size_t>(p.k))
            throw std::invalid_argument("fm: factor row length mismatch");
        for (const json& v : row) p.v.push_back(v.get<double>());
    }
    return p;
}

void save_model(const IsingModel& model, const std::string& path) {
    write_file(path, to_json(model));
}

IsingModel load_model(const std::string& path) { return model_from_json(read_file(path)); }

void save_fm(const FmParams& params, const std::string& path) {
    write_file(path, to_json(params));
}

FmParams load_fm(const std::string& path) { return fm_from_json(read_file(path)); }

}  // namespace fmising
