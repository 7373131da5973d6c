import { describe, expect, it } from "vitest";

import { Store, decodeState, encodeState, initialState } from "../src/state.js";

describe("view state URL round-trip", () => {
  it("round-trips a fully populated state", () => {
    const state = initialState();
    state.selectedRecord = "eq007";
    state.brush = { startIndex: 80, length: 80 };
    state.selectedTopics = [0, 2];
    state.matrixCell = [3, 5];
    state.detailRecord = "eq010";
    state.detailZoom = [14.75, 20.5];
    state.detailAttribute = "moment";
    state.colormap = "discrete";
    state.threshold = 0.4;
    const back = decodeState(encodeState(state));
    expect(back).toEqual(state);
  });

  it("round-trips the defaults", () => {
    expect(decodeState(encodeState(initialState()))).toEqual(initialState());
  });

  it("ignores malformed fragments", () => {
    const state = decodeState("b=abc:def&z=9:1&t=&cm=rainbow&th=7");
    expect(state.brush).toBeNull();
    expect(state.detailZoom).toBeNull();   // z must be increasing
    expect(state.colormap).toBe("continuous");
    expect(state.threshold).toBe(0.25);
  });
});

describe("store", () => {
  it("notifies subscribers on update", () => {
    const store = new Store();
    let seen = 0;
    const unsub = store.subscribe(() => seen++);
    store.update({ selectedRecord: "a" });
    expect(seen).toBe(1);
    expect(store.state.selectedRecord).toBe("a");
    unsub();
    store.update({ selectedRecord: "b" });
    expect(seen).toBe(1);
  });
});
