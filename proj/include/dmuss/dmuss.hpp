#pragma once

#include "dmuss/codec.hpp"
#include "dmuss/errors.hpp"
#include "dmuss/field.hpp"
#include "dmuss/io.hpp"
#include "dmuss/matching.hpp"
#include "dmuss/matrix.hpp"
#include "dmuss/reference.hpp"
#include "dmuss/scheme.hpp"
#include "dmuss/synthesis.hpp"
#include "dmuss/topology.hpp"
#include "dmuss/verification.hpp"
