/**
 * Minimal NPY v1.0 support for 2D float64 arrays: the wire format shared
 * with the scorer. Little-endian '<f8', C order, 64-byte aligned header.
 */

const MAGIC = Buffer.from("\x93NUMPY", "latin1");
const ALIGN = 64;

export interface Matrix {
  height: number;
  width: number;
  /** row-major values, length height * width */
  values: Float64Array;
}

/** Normalize number[][] or a Matrix into a validated Matrix (no copy kept). */
export function toMatrix(input: number[][] | Matrix): Matrix {
  if (Array.isArray(input)) {
    const height = input.length;
    if (height === 0) throw new RangeError("array must have at least one row");
    const width = input[0]!.length;
    if (width === 0) throw new RangeError("array must have at least one column");
    const values = new Float64Array(height * width);
    for (let r = 0; r < height; r++) {
      const row = input[r]!;
      if (row.length !== width) {
        throw new RangeError(`row ${r} has ${row.length} values, expected ${width}`);
      }
      for (let c = 0; c < width; c++) values[r * width + c] = row[c]!;
    }
    return { height, width, values };
  }
  const { height, width, values } = input;
  if (!Number.isInteger(height) || !Number.isInteger(width) || height < 1 || width < 1) {
    throw new RangeError(`invalid dimensions ${height}x${width}`);
  }
  if (values.length !== height * width) {
    throw new RangeError(`expected ${height * width} values, got ${values.length}`);
  }
  return input;
}

export function writeNpy(matrix: Matrix): Buffer {
  const { height, width, values } = toMatrix(matrix);
  const header = `{'descr': '<f8', 'fortran_order': False, 'shape': (${height}, ${width}), }`;
  const unpadded = MAGIC.length + 2 + 2 + header.length + 1;
  const pad = (ALIGN - (unpadded % ALIGN)) % ALIGN;
  const headerBytes = Buffer.from(header + " ".repeat(pad) + "\n", "latin1");
  const out = Buffer.alloc(MAGIC.length + 4 + headerBytes.length + values.length * 8);
  let off = 0;
  off += MAGIC.copy(out, off);
  out.writeUInt8(1, off++); // major version
  out.writeUInt8(0, off++); // minor version
  out.writeUInt16LE(headerBytes.length, off);
  off += 2;
  off += headerBytes.copy(out, off);
  for (let i = 0; i < values.length; i++) {
    out.writeDoubleLE(values[i]!, off + i * 8);
  }
  return out;
}

export function readNpy(data: Buffer): Matrix {
  if (!data.subarray(0, 6).equals(MAGIC)) throw new Error("missing NPY magic");
  if (data[6] !== 1 || data[7] !== 0) throw new Error(`unsupported NPY version ${data[6]}.${data[7]}`);
  const headerLen = data.readUInt16LE(8);
  const header = data.subarray(10, 10 + headerLen).toString("latin1");
  const shape = /'shape':\s*\((\d+),\s*(\d+)\s*,?\s*\)/.exec(header);
  if (!header.includes("'<f8'") || !shape) {
    throw new Error(`unsupported NPY header: ${header.trim()}`);
  }
  if (!header.includes("'fortran_order': False")) throw new Error("Fortran order unsupported");
  const height = Number(shape[1]);
  const width = Number(shape[2]);
  const body = data.subarray(10 + headerLen);
  if (body.length !== height * width * 8) {
    throw new Error(`body size ${body.length} != expected ${height * width * 8}`);
  }
  const values = new Float64Array(height * width);
  for (let i = 0; i < values.length; i++) values[i] = body.readDoubleLE(i * 8);
  return { height, width, values };
}
