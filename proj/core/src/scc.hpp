#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace gridlens::detail {

/// Iterative Tarjan over nodes 0..n-1 restricted to `active`. Returns the
/// components that are cycles: more than one node, or a node with an edge
/// to itself. Each component is sorted ascending; components are ordered by
/// their smallest node.
inline std::vector<std::vector<std::size_t>> cyclic_components(const std::vector<std::vector<std::size_t>>& succ,
                                                               const std::vector<char>& active) {
    const std::size_t n = succ.size();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call;  // node, next successor position
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (!active[root] || index[root] != kUnset) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < succ[v].size()) {
                std::size_t w = succ[v][pos++];
                if (!active[w]) continue;
                if (index[w] == kUnset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] != index[done]) continue;
            std::vector<std::size_t> comp;
            for (;;) {
                std::size_t w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp.push_back(w);
                if (w == done) break;
            }
            bool self_loop = comp.size() == 1 &&
                             std::find(succ[done].begin(), succ[done].end(), done) != succ[done].end();
            if (comp.size() > 1 || self_loop) {
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace gridlens::detail
