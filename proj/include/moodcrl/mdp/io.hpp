#ifndef MOODCRL_MDP_IO_HPP_
#define MOODCRL_MDP_IO_HPP_

#include <filesystem>
#include <iosfwd>

#include "moodcrl/mdp/causal_graph.hpp"
#include "moodcrl/mdp/dataset.hpp"

namespace moodcrl::mdp {

// JSON-lines, one transition per line:
//   {"s":[...],"a":[...],"s_next":[...],"r":...,"episode":int}
void write_dataset(std::ostream& out, const Dataset& dataset);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

// The layout is inferred from the first line when not supplied.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);

// {"names":[...],"edges":[[j,i],...]}; the dimension is the name count.
void write_graph(std::ostream& out, const CausalGraph& graph);
void save_graph(const std::filesystem::path& path, const CausalGraph& graph);
CausalGraph read_graph(std::istream& in, const TupleLayout& layout);
CausalGraph load_graph(const std::filesystem::path& path, const TupleLayout& layout);

}  // namespace moodcrl::mdp

#endif  // MOODCRL_MDP_IO_HPP_
