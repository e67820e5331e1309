#ifndef TWONN_TWONN_HPP
#define TWONN_TWONN_HPP

#include "twonn/benchmark.hpp"
#include "twonn/dataset.hpp"
#include "twonn/error.hpp"
#include "twonn/estimator.hpp"
#include "twonn/generators.hpp"
#include "twonn/io.hpp"
#include "twonn/kdtree.hpp"
#include "twonn/neighbors.hpp"
#include "twonn/scan.hpp"

#endif
