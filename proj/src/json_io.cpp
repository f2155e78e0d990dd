#include "pipeopt/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pipeopt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::set<Tag> tags_from(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw std::runtime_error(where + ": \"tags\" must be an array");
    std::set<Tag> tags;
    for (const auto& t : arr) tags.insert(t.get<std::string>());
    return tags;
}

ordered_json tags_to(const std::set<Tag>& tags) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : tags) arr.push_back(t);  // std::set keeps them sorted
    return arr;
}

const Image& resolve_image(const ImageCatalog& catalog, const std::string& id,
                           const std::string& where) {
    for (const auto& img : catalog) {
        if (img.id == id) return img;
    }
    throw std::runtime_error(where + ": unknown image \"" + id + "\"");
}

}  // namespace

nlohmann::ordered_json catalog_to_json(const ImageCatalog& catalog) {
    ordered_json doc;
    doc["images"] = ordered_json::array();
    for (const auto& img : catalog) {
        ordered_json entry;
        entry["id"] = img.id;
        entry["tags"] = tags_to(img.tags);
        if (img.synthetic) entry["synthetic"] = true;
        doc["images"].push_back(std::move(entry));
    }
    return doc;
}

ImageCatalog catalog_from_json(const nlohmann::json& doc) {
    if (!doc.contains("images") || !doc["images"].is_array()) {
        throw std::runtime_error("image catalog: missing \"images\" array");
    }
    ImageCatalog catalog;
    for (const auto& entry : doc["images"]) {
        Image img;
        img.id = entry.at("id").get<std::string>();
        img.tags = tags_from(entry.at("tags"), "image " + img.id);
        img.synthetic = entry.value("synthetic", false);
        catalog.push_back(std::move(img));
    }
    return catalog;
}

nlohmann::ordered_json pipeline_to_json(const Pipeline& pipeline) {
    ordered_json doc;
    doc["operators"] = ordered_json::array();
    for (const auto& op : pipeline.operators) {
        ordered_json entry;
        entry["id"] = op.id;
        entry["sdk"] = op.sdk;
        entry["tags"] = tags_to(op.required_tags);
        doc["operators"].push_back(std::move(entry));
    }
    doc["edges"] = ordered_json::array();
    for (const auto& e : pipeline.edges) {
        doc["edges"].push_back(ordered_json{{"from", e.from}, {"to", e.to}});
    }
    if (!pipeline.groups.empty()) {
        doc["groups"] = ordered_json::array();
        for (const auto& g : pipeline.groups) {
            ordered_json entry;
            entry["id"] = g.id;
            entry["operators"] = g.operator_ids;
            entry["image"] = g.image.id;
            doc["groups"].push_back(std::move(entry));
        }
    }
    return doc;
}

Pipeline pipeline_from_json(const nlohmann::json& doc, const ImageCatalog& catalog) {
    Pipeline pipeline;
    if (!doc.contains("operators") || !doc["operators"].is_array()) {
        throw std::runtime_error("pipeline: missing \"operators\" array");
    }
    for (const auto& entry : doc["operators"]) {
        Operator op;
        op.id = entry.at("id").get<std::string>();
        op.sdk = entry.value("sdk", "");
        op.required_tags = tags_from(entry.at("tags"), "operator " + op.id);
        pipeline.operators.push_back(std::move(op));
    }
    for (const auto& entry : doc.value("edges", json::array())) {
        pipeline.edges.push_back(Edge{entry.at("from").get<std::string>(),
                                      entry.at("to").get<std::string>()});
    }
    for (const auto& entry : doc.value("groups", json::array())) {
        Group g;
        g.id = entry.at("id").get<std::string>();
        for (const auto& oid : entry.at("operators")) {
            g.operator_ids.push_back(oid.get<std::string>());
        }
        g.image = resolve_image(catalog, entry.at("image").get<std::string>(),
                                "group " + g.id);
        pipeline.groups.push_back(std::move(g));
    }
    auto issues = pipeline_issues(pipeline);
    if (!issues.empty()) {
        throw std::runtime_error("pipeline: " + issues.front());
    }
    return pipeline;
}

nlohmann::ordered_json config_to_json(const GroupingConfig& config) {
    Pipeline doc_pipeline = config.pipeline;
    doc_pipeline.groups = config.groups;
    return pipeline_to_json(doc_pipeline);
}

GroupingConfig config_from_json(const nlohmann::json& doc, const ImageCatalog& catalog) {
    Pipeline pipeline = pipeline_from_json(doc, catalog);
    GroupingConfig config;
    config.groups = std::move(pipeline.groups);
    pipeline.groups.clear();
    config.pipeline = std::move(pipeline);
    return config;
}

std::string dump_json(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pipeopt
