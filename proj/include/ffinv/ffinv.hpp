#pragma once

#include "ffinv/error.hpp"
#include "ffinv/field.hpp"
#include "ffinv/matrix.hpp"
#include "ffinv/structured.hpp"
#include "ffinv/displacement.hpp"
#include "ffinv/geninv.hpp"
#include "ffinv/blackbox.hpp"
#include "ffinv/costmodel.hpp"
#include "ffinv/krylov.hpp"
#include "ffinv/rank.hpp"
#include "ffinv/apps/homology.hpp"
#include "ffinv/apps/group_ring.hpp"
#include "ffinv/io.hpp"
