package org.example.arrays;

import org.junit.Test;

public class ArrayInitTest {
    private static final String[] NAMES = {"x", "y", "z"};

    @Test
    public void readsElements() {
        int[] primes = new int[] {2, 3, 5, 7};
        assertEquals(5, primes[2]);
        assertEquals("y", NAMES[1]);
        char[] letters = {'a', 'b'};
        assertEquals('b', letters[letters.length - 1]);
    }
}
