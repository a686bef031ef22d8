package org.h2.test.unit;

import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class TestCache {
    @Test
    public void testClear() {
        int size = 4;
        while (size > 0) {
            size--;
        }
        assertEquals(0, size);
    }
}
