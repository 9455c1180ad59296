#pragma once

#include "bool_matrix.hpp"
#include "datagen.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "model_selection.hpp"
#include "optimizer.hpp"
#include "regularizer.hpp"
