/**
 * Seeded 64-bit mixer, bit-identical to the gateway's reference
 * implementation (see docs/noise-prng.md in the repo root). All state
 * lives in BigInt; only the final draws convert to Number.
 */

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;
const MIX1 = 0xbf58476d1ce4e5b9n;
const MIX2 = 0x94d049bb133111ebn;

export function mix64(value: bigint): bigint {
  let z = value & MASK64;
  z = ((z ^ (z >> 30n)) * MIX1) & MASK64;
  z = ((z ^ (z >> 27n)) * MIX2) & MASK64;
  return z ^ (z >> 31n);
}

export class SplitMix64 {
  private state: bigint;

  constructor(seed: bigint | string | number) {
    this.state = BigInt(seed) & MASK64;
  }

  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64;
    return mix64(this.state);
  }

  /** Uniform-ish integer in [0, bound). */
  nextBelow(bound: number): number {
    if (bound <= 0) throw new RangeError("bound must be positive");
    return Number(this.nextU64() % BigInt(bound));
  }

  /** Float in [0, 1) from the top 53 bits; exact in IEEE doubles. */
  nextUnit(): number {
    return Number(this.nextU64() >> 11n) / 2 ** 53;
  }
}

/** Canvas/WebGL/audio noise seeds: the first three outputs of the stream. */
export function deriveNoiseSeeds(masterSeed: bigint): [bigint, bigint, bigint] {
  const stream = new SplitMix64(masterSeed);
  return [stream.nextU64(), stream.nextU64(), stream.nextU64()];
}
