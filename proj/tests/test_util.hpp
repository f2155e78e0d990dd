#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pipeopt/core.hpp"
#include "pipeopt/rng.hpp"

namespace pipeopt::test {

inline Operator op(std::string id, std::vector<Tag> tags, std::string sdk = "golang") {
    Operator o;
    o.id = std::move(id);
    o.sdk = std::move(sdk);
    o.required_tags.insert(tags.begin(), tags.end());
    return o;
}

inline Image image(std::string id, std::vector<Tag> tags) {
    Image img;
    img.id = std::move(id);
    img.tags.insert(tags.begin(), tags.end());
    return img;
}

inline Pipeline line_pipeline(std::vector<Operator> ops) {
    Pipeline p;
    for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
        p.edges.push_back({ops[i].id, ops[i + 1].id});
    }
    p.operators = std::move(ops);
    return p;
}

inline Group group(std::string id, std::vector<OperatorId> members, Image img) {
    Group g;
    g.id = std::move(id);
    g.operator_ids = std::move(members);
    g.image = std::move(img);
    return g;
}

struct RandomInstance {
    Pipeline pipeline;
    ImageCatalog images;
};

// Small random instance with every operator satisfiable by construction:
// images are drawn first, each operator requires a non-empty subset of some
// image's tags.
inline RandomInstance random_instance(std::uint64_t seed, std::size_t max_ops = 8,
                                      std::size_t max_images = 3) {
    Rng rng(seed);
    static const std::vector<Tag> tag_pool = {"golang", "spt-1", "spt-2", "spt-3", "py"};

    RandomInstance inst;
    std::size_t n_images = rng.in_range(1, max_images);
    for (std::size_t m = 0; m < n_images; ++m) {
        Image img;
        img.id = "img-" + std::to_string(m + 1);
        std::size_t n_tags = rng.in_range(1, 3);
        auto tags = rng.sample(tag_pool, n_tags);
        img.tags.insert(tags.begin(), tags.end());
        inst.images.push_back(std::move(img));
    }

    std::size_t n_ops = rng.in_range(1, max_ops);
    for (std::size_t i = 0; i < n_ops; ++i) {
        const Image& host = inst.images[rng.bounded(inst.images.size())];
        std::vector<Tag> host_tags(host.tags.begin(), host.tags.end());
        std::size_t k = rng.in_range(1, host_tags.size());
        auto chosen = rng.sample(host_tags, k);
        Operator o;
        o.id = "op-" + std::to_string(i + 1);
        o.sdk = "golang";
        o.required_tags.insert(chosen.begin(), chosen.end());
        inst.pipeline.operators.push_back(std::move(o));
    }

    if (n_ops > 1) {
        std::size_t max_edges = n_ops * (n_ops - 1) / 2;
        std::size_t n_edges = rng.bounded(std::min<std::size_t>(max_edges, 2 * n_ops) + 1);
        std::set<std::pair<std::size_t, std::size_t>> used;
        std::size_t attempts = 0;
        while (used.size() < n_edges && attempts++ < 100) {
            std::size_t u = rng.bounded(n_ops);
            std::size_t v = rng.bounded(n_ops);
            if (u == v) continue;
            if (u > v) std::swap(u, v);  // simple graph, one direction
            if (!used.insert({u, v}).second) continue;
            inst.pipeline.edges.push_back({inst.pipeline.operators[u].id,
                                           inst.pipeline.operators[v].id});
        }
    }
    return inst;
}

}  // namespace pipeopt::test
