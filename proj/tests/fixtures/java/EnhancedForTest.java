package org.example.collections;

import java.util.ArrayList;
import java.util.List;
import org.junit.Test;

public class EnhancedForTest {
    @Test
    public void sumsList() {
        List<Integer> values = new ArrayList<>();
        values.add(3);
        values.add(4);
        int sum = 0;
        for (Integer v : values) {
            sum += v;
        }
        assertEquals(7, sum);
    }
}
