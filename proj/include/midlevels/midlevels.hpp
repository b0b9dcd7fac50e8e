#ifndef MIDLEVELS_MIDLEVELS_HPP
#define MIDLEVELS_MIDLEVELS_HPP

#include "midlevels/assembly.hpp"
#include "midlevels/bitstring.hpp"
#include "midlevels/byte_io.hpp"
#include "midlevels/ham_search.hpp"
#include "midlevels/part.hpp"
#include "midlevels/path_file.hpp"
#include "midlevels/ranking.hpp"
#include "midlevels/reduced_graph.hpp"

#endif  // MIDLEVELS_MIDLEVELS_HPP
