#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fixture_repo.hpp"
#include "methodlens/java/extract.hpp"
#include "methodlens/metrics/metrics.hpp"

namespace testsupport {

/// Compares extracted metrics for the hand-counted corpus against its golden file.
/// Returns one message per mismatch; `checked` receives the number of methods compared.
inline std::vector<std::string> metrics_corpus_mismatches(int& checked, double tol = 1e-9) {
    namespace ml = methodlens;
    const std::string dir = fixtures_dir() + "/metrics_corpus";
    std::ifstream src(dir + "/Corpus.java");
    std::stringstream buf;
    buf << src.rdbuf();
    const auto decls = ml::java::extract_methods(ml::java::SourceFile("corpus/Corpus.java", buf.str()));
    std::ifstream gin(dir + "/metrics_golden.json");
    const auto golden = nlohmann::json::parse(gin);

    std::vector<std::string> out;
    checked = 0;
    for (const auto& g : golden) {
        const std::string name = g["name"];
        const ml::java::MethodDeclaration* d = nullptr;
        for (const auto& x : decls) {
            if (x.name == name) d = &x;
        }
        if (!d) {
            out.push_back(name + ": not extracted");
            continue;
        }
        ++checked;
        if (d->start_line != g["startLine"].get<int>() || d->end_line != g["endLine"].get<int>()) {
            out.push_back(name + ": span " + std::to_string(d->start_line) + "-" + std::to_string(d->end_line));
        }
        const auto m = ml::metrics::compute_metric_vector(*d);
        const auto h = ml::metrics::compute_halstead(*d);
        const auto& ints = g["ints"];
        const std::vector<std::pair<std::string, long>> actual_ints = {
            {"size", m.size},
            {"mccabe", m.mccabe},
            {"nvar", m.nvar},
            {"ncomp", m.ncomp},
            {"maxBlockDepth", m.max_block_depth},
            {"fanout", m.fanout},
            {"halsteadLength", m.halstead_length},
            {"halsteadVocabulary", h.vocabulary},
            {"parameters", m.parameters},
            {"variables", m.variables},
            {"commentLines", ml::metrics::compute_counts(*d).comment_lines},
            {"getterSetter", m.getter_setter},
            {"isPublic", m.is_public},
            {"isStatic", m.is_static},
        };
        for (const auto& [key, value] : actual_ints) {
            if (ints[key].get<long>() != value) {
                out.push_back(name + "." + key + ": expected " + std::to_string(ints[key].get<long>()) + ", got " +
                              std::to_string(value));
            }
        }
        const auto& floats = g["floats"];
        const std::vector<std::pair<std::string, double>> actual_floats = {
            {"indentStd", m.indent_std},
            {"commentRatio", m.comment_ratio},
            {"maintainabilityIndex", m.maintainability_index},
            {"readability", m.readability},
            {"simpleReadability", m.simple_readability},
            {"halsteadVolume", h.volume},
        };
        for (const auto& [key, value] : actual_floats) {
            const double want = floats[key].get<double>();
            if (!(std::abs(want - value) <= tol)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << name << "." << key << ": expected " << want << ", got " << value;
                out.push_back(msg.str());
            }
        }
    }
    return out;
}

}  // namespace testsupport
