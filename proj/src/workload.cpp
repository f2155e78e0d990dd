#include "pipeopt/workload.hpp"

#include <stdexcept>

#include "pipeopt/rng.hpp"

namespace pipeopt {

std::string topology_name(Topology t) {
    return t == Topology::Line ? "line" : "parallel";
}

Topology topology_from_name(const std::string& name) {
    if (name == "line") return Topology::Line;
    if (name == "parallel") return Topology::Parallel;
    throw std::invalid_argument("unknown topology: " + name);
}

namespace {

Operator make_op(OperatorId id) {
    return Operator{std::move(id), "golang", {"golang"}};
}

ImageCatalog make_catalog(bool literal_tags) {
    ImageCatalog catalog;
    catalog.push_back(Image{"img-default", {"golang"}});
    for (int k = 1; k <= 3; ++k) {
        Image img;
        img.id = "img-spt-" + std::to_string(k);
        img.tags = {"spt-" + std::to_string(k)};
        if (literal_tags) img.tags.insert("golang");
        catalog.push_back(std::move(img));
    }
    return catalog;
}

}  // namespace

Workload generate_pipeline(const WorkloadParams& params) {
    if (params.special_ops < 1 || params.fib_step < 1 || params.base_n < 1 ||
        params.rounds < 0 || params.lines < 1 || params.ops_per_line < 1) {
        throw std::invalid_argument("invalid params");
    }

    Pipeline pipeline;
    pipeline.operators.push_back(make_op("gen"));

    if (params.topology == Topology::Line) {
        for (int i = 1; i <= 12; ++i) {
            pipeline.operators.push_back(make_op("fib-" + std::to_string(i)));
        }
        pipeline.operators.push_back(make_op("term"));
        pipeline.edges.push_back({"gen", "fib-1"});
        for (int i = 1; i < 12; ++i) {
            pipeline.edges.push_back(
                {"fib-" + std::to_string(i), "fib-" + std::to_string(i + 1)});
        }
        pipeline.edges.push_back({"fib-12", "term"});
        pipeline.edges.push_back({"gen", "term"});  // control edge
    } else {
        for (std::size_t l = 1; l <= params.lines; ++l) {
            for (std::size_t j = 1; j <= params.ops_per_line; ++j) {
                pipeline.operators.push_back(
                    make_op("fib-" + std::to_string(l) + "-" + std::to_string(j)));
            }
        }
        pipeline.operators.push_back(make_op("term"));
        for (std::size_t l = 1; l <= params.lines; ++l) {
            auto fib = [&](std::size_t j) {
                return "fib-" + std::to_string(l) + "-" + std::to_string(j);
            };
            pipeline.edges.push_back({"gen", fib(1)});
            for (std::size_t j = 1; j < params.ops_per_line; ++j) {
                pipeline.edges.push_back({fib(j), fib(j + 1)});
            }
            pipeline.edges.push_back({fib(params.ops_per_line), "term"});
        }
        pipeline.edges.push_back({"gen", "term"});  // control edge
    }

    pipeline = assign_special_tags(std::move(pipeline), params.special_ops,
                                   params.seed, params.literal_tags);
    return Workload{std::move(pipeline), make_catalog(params.literal_tags)};
}

Pipeline assign_special_tags(Pipeline pipeline, std::size_t n, std::uint64_t seed,
                             bool literal_tags) {
    if (n < 1) {
        throw std::invalid_argument("special_ops must be at least 1");
    }
    std::vector<std::size_t> fib_indices;
    for (std::size_t i = 0; i < pipeline.operators.size(); ++i) {
        if (role_of(pipeline.operators[i].id) == OperatorRole::Fibonacci) {
            fib_indices.push_back(i);
        }
    }
    if (n > fib_indices.size()) {
        throw std::invalid_argument("special_ops exceeds computing operator count");
    }
    Rng rng(seed);
    auto chosen = rng.sample(fib_indices, n);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        std::string tag = "spt-" + std::to_string(i % 3 + 1);
        auto& op = pipeline.operators[chosen[i]];
        op.required_tags = {tag};
        if (literal_tags) op.required_tags.insert("golang");
    }
    return pipeline;
}

OperatorRole role_of(const OperatorId& id) {
    if (id == "gen") return OperatorRole::Generator;
    if (id == "term") return OperatorRole::Terminator;
    if (id.rfind("fib", 0) == 0) return OperatorRole::Fibonacci;
    throw std::invalid_argument("operator id carries no role: " + id);
}

int fib_argument(const Pipeline& pipeline, const OperatorId& id,
                 const WorkloadParams& params) {
    if (role_of(id) != OperatorRole::Fibonacci) {
        throw std::invalid_argument("not a fibonacci operator: " + id);
    }
    // walk back along the chain of fibonacci predecessors
    int depth = 0;
    OperatorId current = id;
    for (;;) {
        OperatorId fib_pred;
        int fib_preds = 0;
        for (const auto& e : pipeline.edges) {
            if (e.to == current && role_of(e.from) == OperatorRole::Fibonacci) {
                fib_pred = e.from;
                ++fib_preds;
            }
        }
        if (fib_preds == 0) break;
        if (fib_preds > 1) {
            throw std::invalid_argument("operator " + id + " is not on a single chain");
        }
        current = fib_pred;
        ++depth;
    }
    return params.base_n + depth * params.fib_step;
}

}  // namespace pipeopt
